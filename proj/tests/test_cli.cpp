#include <doctest.h>

#include "fractim/demos.hpp"
#include "fractim/job.hpp"

using namespace fractim;
using nlohmann::json;

namespace {

json moran_job(const char* fn) {
  return json{{"schema", 1},
              {"function", fn},
              {"fractal1",
               {{"kind", "moran"},
                {"c", {{"period", {"1/3"}}}},
                {"n", {{"period", {2}}}},
                {"kappa", "0"}}},
              {"fractal2", "same"}};
}

}  // namespace

TEST_CASE("job parsing validates the schema and the pair") {
  CHECK_THROWS_AS(job_from_json(json{{"function", "x+y"}}), InvariantError);

  json j = moran_job("x + y");
  Job job = job_from_json(j);
  CHECK(job.function == "x + y");
  CHECK(job.budget == 200000);
  CHECK(job.fractal1.kind == FractalSpec::Kind::Moran);

  // mismatched classes are rejected
  json bad = j;
  bad["fractal2"] = {{"kind", "moran"},
                     {"c", {{"period", {"1/4"}}}},
                     {"n", {{"period", {2}}}},
                     {"kappa", "0"}};
  CHECK_THROWS_AS(job_from_json(bad), InvariantError);

  json mixed = j;
  mixed["fractal2"] = {{"kind", "homogeneous"}, {"lambda", "1/3"}, {"shifts", {"0", "2/3"}}};
  CHECK_THROWS_AS(job_from_json(mixed), InvariantError);
}

TEST_CASE("certify run: exit codes follow the verdict") {
  RunResult sum = run_certify(job_from_json(moran_job("x + y")));
  CHECK(sum.exit_code == 0);
  CHECK(sum.report["verdict"]["status"] == "certified");
  CHECK(sum.report["constants"].contains("linear"));
  CHECK(sum.report["constants"]["unit_slope_covers"] == true);

  RunResult prod = run_certify(job_from_json(moran_job("x*y")));
  CHECK(prod.exit_code == 1);
  CHECK(prod.report["verdict"]["status"] == "conditions-violated");
  CHECK(prod.report["verdict"].contains("witness"));
}

TEST_CASE("certify run: homogeneous and general kinds dispatch") {
  json ifs_job{{"schema", 1},
               {"function", "sin(-0.5*x*y) + 12*x + 6*y"},
               {"fractal1", {{"kind", "homogeneous"}, {"lambda", "1/3"}, {"shifts", {"0", "2/3"}}}},
               {"fractal2", "same"}};
  RunResult wavy = run_certify(job_from_json(ifs_job));
  CHECK(wavy.exit_code == 0);
  CHECK(wavy.report["constants"]["tau1"] == doctest::Approx(1.0 / 3));

  json maps = json::array();
  maps.push_back(json::array({"1/3", "0"}));
  maps.push_back(json::array({"1/4", "0"}));
  maps.push_back(json::array({"1/3", "2/3"}));
  json general_job{
      {"schema", 1},
      {"function", "x^2 + y^2 + 6*x + 3*y + 0.5*x*y"},
      {"fractal1",
       {{"kind", "general"},
        {"maps", maps},
        {"witness", {{"lambda", "1/3"}, {"shifts", {"0", "2/3"}}, {"words", {"1", "3"}}}}}},
      {"fractal2", "same"}};
  RunResult nine = run_certify(job_from_json(general_job));
  CHECK(nine.exit_code == 0);
  CHECK(nine.report["constants"]["hull_image"][1] == doctest::Approx(11.5));

  json no_witness = general_job;
  no_witness["fractal1"].erase("witness");
  no_witness["fractal2"] = no_witness["fractal1"];
  CHECK_THROWS_AS(run_certify(job_from_json(no_witness)), InvariantError);
}

TEST_CASE("image run: stabilization and the force fallback") {
  json j = moran_job("x + y");
  j["kmax"] = 6;
  RunResult sum = run_image(job_from_json(j), false);
  CHECK(sum.exit_code == 0);
  CHECK(sum.report["all_stabilized"] == true);
  CHECK(sum.report["levels"].size() == 7);

  json p = moran_job("x*y");
  p["kmax"] = 4;
  CHECK_THROWS_AS(run_image(job_from_json(p), false), InvariantError);
  RunResult forced = run_image(job_from_json(p), true);
  CHECK(forced.exit_code == 1);
  CHECK(forced.report["mode"] == "corner-enumeration (non-rigorous)");
  CHECK(forced.report["levels"][1]["components"].get<int>() >= 2);
}

TEST_CASE("restricted-domain job") {
  json j{{"schema", 1},
         {"function", "1/(x-0.5)^2 + 1000*x + 500*y"},
         {"fractal1",
          {{"kind", "moran"},
           {"c", {{"period", {"1/3"}}}},
           {"n", {{"period", {2}}}},
           {"kappa", "0"}}},
         {"fractal2", "same"},
         {"domain", {{"kind", "level-boxes"}, {"p", 1}}}};
  RunResult res = run_certify(job_from_json(j));
  CHECK(res.exit_code == 0);
  CHECK(res.report["verdict"]["conclusion"].get<std::string>().find("at most 4") !=
        std::string::npos);
}

TEST_CASE("oracle run") {
  json j = moran_job("x + y");
  j["oracle_depth"] = 6;
  j["oracle_tol"] = 0.05;
  RunResult res = run_oracle(job_from_json(j));
  CHECK(res.exit_code == 0);
  CHECK(res.report["components"] == 1);
  CHECK(res.report["min"] == doctest::Approx(0.0));
  CHECK(res.report["max"] == doctest::Approx(2.0));
}

TEST_CASE("reports are byte-deterministic") {
  json j = moran_job("x + y");
  std::string a = run_certify(job_from_json(j)).report.dump();
  std::string b = run_certify(job_from_json(j)).report.dump();
  CHECK(a == b);

  json r = moran_job("x + 0.5*y");
  r["strategy"] = "random";
  r["seeds"] = {5, 6};
  r["kmax"] = 5;
  std::string c = run_image(job_from_json(r), false).report.dump();
  std::string d = run_image(job_from_json(r), false).report.dump();
  CHECK(c == d);
}

TEST_CASE("demo registry") {
  auto names = demo_names();
  CHECK(names.size() == 7);
  CHECK_THROWS_AS(run_demo("no-such-demo"), InvariantError);
  // the cheap demos run clean end to end
  CHECK(run_demo("corollary7-constants").exit_code == 0);
  CHECK(run_demo("cantor-product").exit_code == 0);
}
