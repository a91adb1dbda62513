#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fractim/demos.hpp"
#include "fractim/job.hpp"

namespace {

// The "report" member is byte-identical for identical jobs and seeds;
// wall-clock time lives in the separate runtime_ms field.
void emit(const fractim::RunResult& result, const std::string& out_path, double runtime_ms) {
  std::cout << result.human;
  if (!out_path.empty()) {
    nlohmann::json wrapper;
    wrapper["report"] = result.report;
    wrapper["runtime_ms"] = runtime_ms;
    std::ofstream out(out_path);
    if (!out) throw fractim::InvariantError("cannot write report to '" + out_path + "'");
    out << wrapper.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certify and compute continuous images of fractal interval sets"};
  app.require_subcommand(1);

  std::string job_path, out_path, demo_name;
  long budget = -1;
  int kmax = -1, depth = -1;
  bool force = false;

  CLI::App* certify = app.add_subcommand("certify", "verify the derivative conditions");
  certify->add_option("--job", job_path, "job file (JSON)")->required();
  certify->add_option("--budget", budget, "leaf-box budget per condition");
  certify->add_option("--out", out_path, "write the JSON report here");

  CLI::App* image = app.add_subcommand("image", "level images and stabilization");
  image->add_option("--job", job_path, "job file (JSON)")->required();
  image->add_option("--kmax", kmax, "deepest level to compute");
  image->add_flag("--force", force, "allow the non-rigorous corner fallback");
  image->add_option("--out", out_path, "write the JSON report here");

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force sampled image");
  oracle->add_option("--job", job_path, "job file (JSON)")->required();
  oracle->add_option("--depth", depth, "sampling depth");
  oracle->add_option("--out", out_path, "write the JSON report here");

  CLI::App* demo = app.add_subcommand("demo", "run a pre-registered scenario");
  demo->add_option("name", demo_name, "one of the registered demo names")->required();
  demo->add_option("--out", out_path, "write the JSON report here");

  CLI11_PARSE(app, argc, argv);

  try {
    auto start = std::chrono::steady_clock::now();
    fractim::RunResult result;
    if (certify->parsed()) {
      fractim::Job job = fractim::job_from_file(job_path);
      if (budget > 0) job.budget = budget;
      result = fractim::run_certify(job);
    } else if (image->parsed()) {
      fractim::Job job = fractim::job_from_file(job_path);
      if (kmax >= 0) job.kmax = kmax;
      result = fractim::run_image(job, force);
    } else if (oracle->parsed()) {
      fractim::Job job = fractim::job_from_file(job_path);
      if (depth > 0) job.oracle_depth = depth;
      result = fractim::run_oracle(job);
    } else {
      result = fractim::run_demo(demo_name);
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
    emit(result, out_path, ms);
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
