#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "fractim/certifier.hpp"
#include "fractim/fractal.hpp"

namespace fractim {

struct FractalSpec {
  enum class Kind { Moran, Homogeneous, General };
  Kind kind = Kind::Moran;
  std::optional<MoranClass> moran;
  std::optional<HomogeneousIFS> homogeneous;
  std::optional<GeneralIFS> general;
  std::optional<HomogeneousIFS> witness_ifs;
  std::vector<std::string> witness_words;
};

struct Tolerances {
  double image_merge = 1e-9;  // merging box images
  double compare = 1e-9;      // level-to-level comparisons
  double oracle_merge = 0.01;
};

// A validated job file: the function text, both fractal specs, the domain
// restriction, budgets and tolerances, and the realization choice.
struct Job {
  std::string function;
  FractalSpec fractal1, fractal2;
  bool restricted = false;
  int level_p = 1;
  long budget = 200000;
  int kmax = 8;
  std::optional<int> oracle_depth;  // default depends on the map count
  Tolerances tol;
  Placement strategy = Placement::Uniform;
  std::uint64_t seed1 = 1, seed2 = 2;
};

Job job_from_json(const nlohmann::json& j);
Job job_from_file(const std::string& path);

struct RunResult {
  int exit_code = 0;  // certify: 0 certified, 1 violated, 2 unknown (3 = error, via exceptions)
  nlohmann::json report;
  std::string human;
};

nlohmann::json to_json(const Interval& iv);
nlohmann::json to_json(const IntervalSet& s);
nlohmann::json to_json(const Verdict& v);

RunResult run_certify(const Job& job);
RunResult run_image(const Job& job, bool force);
RunResult run_oracle(const Job& job);

}  // namespace fractim
