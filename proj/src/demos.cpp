#include "fractim/demos.hpp"

#include <cmath>
#include <sstream>

#include "fractim/image.hpp"
#include "fractim/oracle.hpp"

namespace fractim {

namespace fixtures {

MoranClass cantor_class() {
  PeriodicSeq<Scalar> c;
  c.period.push_back(Scalar::rational(1, 3));
  PeriodicSeq<int> n;
  n.period.push_back(2);
  return MoranClass(std::move(c), std::move(n), Scalar::rational(0, 1));
}

MoranClass overlap_class() {
  PeriodicSeq<Scalar> c;
  c.period.push_back(Scalar::rational(3, 10));
  PeriodicSeq<int> n;
  n.period.push_back(3);
  return MoranClass(std::move(c), std::move(n), Scalar::rational(1, 2));
}

HomogeneousIFS cantor_ifs() {
  return HomogeneousIFS(Scalar::rational(1, 3),
                        {Scalar::rational(0, 1), Scalar::rational(2, 3)});
}

GeneralIFS mixed_ratio_ifs() {
  return GeneralIFS({AffineMap{Scalar::rational(1, 3), Scalar::rational(0, 1)},
                     AffineMap{Scalar::rational(1, 4), Scalar::rational(0, 1)},
                     AffineMap{Scalar::rational(1, 3), Scalar::rational(2, 3)}});
}

Expr example9_expr() { return Expr::parse("x^2 + y^2 + 6*x + 3*y + 0.5*x*y"); }

Expr example10_expr() { return Expr::parse("sin(-0.5*x*y) + 12*x + 6*y"); }

}  // namespace fixtures

namespace {

using nlohmann::json;

struct DemoRun {
  json checks = json::array();
  bool pass = true;

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    json c;
    c["name"] = name;
    c["pass"] = ok;
    if (!detail.empty()) c["detail"] = detail;
    checks.push_back(c);
    pass = pass && ok;
  }
};

IntervalSet single(double lo, double hi) { return normalize({Interval(lo, hi)}, 0.0); }

// Shared core of the two unit-slope demos: certify the linear path and the
// full interval path, then verify every level image down to k_max.
void run_steinhaus(DemoRun& run, json& report, double slope_value, long long num, long long den,
                   double expect_lo, double expect_hi) {
  MoranClass cls = fixtures::cantor_class();
  std::string fn = slope_value > 0 ? "x + y" : "x - y";
  PartialBundle b = PartialBundle::of(Expr::parse(fn));

  Verdict lin = certify_linear(cls, Scalar::rational(num, den));
  run.check("linear-certified", lin.certified(), lin.conclusion);
  run.check("unit-slope-covers", distinct_levels(cls).unit_slope_covers);

  Verdict full = certify_moran(b, cls, DomainSpec::unit_square());
  run.check("interval-certified", full.certified());

  MoranRealization r1 = realize(cls, 10, Placement::Uniform);
  MoranRealization r2 = realize(cls, 10, Placement::Uniform);
  LevelFn c_fn = [&](int k) { return level_intervals(r1, k); };
  LevelFn d_fn = [&](int k) { return level_intervals(r2, k); };
  LevelImageReport rep =
      stabilization_report(b, full.sign_case, c_fn, d_fn, 10, 1e-9, 1e-9);
  IntervalSet expected = single(expect_lo, expect_hi);
  bool all_match = true, all_single = true;
  for (const LevelImageRow& row : rep.rows) {
    all_match = all_match && set_equal(row.image, expected, 1e-9);
    all_single = all_single && row.components == 1;
  }
  run.check("image-at-every-level", all_match);
  run.check("single-component", all_single);
  run.check("stabilized", rep.all_stabilized);

  report["linear"] = to_json(lin);
  report["verdict"] = to_json(full);
  json rows = json::array();
  for (const LevelImageRow& row : rep.rows)
    rows.push_back({{"k", row.k}, {"image", to_json(row.image)}});
  report["levels"] = rows;
}

void demo_steinhaus_sum(DemoRun& run, json& report) {
  run_steinhaus(run, report, 1.0, 1, 1, 0.0, 2.0);
}

void demo_steinhaus_diff(DemoRun& run, json& report) {
  run_steinhaus(run, report, -1.0, -1, 1, -1.0, 1.0);
}

void demo_cantor_product(DemoRun& run, json& report) {
  MoranClass cls = fixtures::cantor_class();
  PartialBundle b = PartialBundle::of(Expr::parse("x*y"));

  Verdict v = certify_moran(b, cls, DomainSpec::unit_square());
  run.check("not-certified", !v.certified(), to_string(v.status));
  report["verdict"] = to_json(v);

  // Corner-enumeration images stay multi-component at every level.
  MoranRealization r = realize(cls, 4, Placement::Uniform);
  json rows = json::array();
  bool multi = true;
  for (int k = 1; k <= 4; ++k) {
    auto C = level_intervals(r, k);
    IntervalSet img = level_image(b, std::nullopt, C, C, 1e-9);
    multi = multi && img.size() >= 2;
    rows.push_back({{"k", k}, {"components", img.size()}, {"image", to_json(img)}});
  }
  run.check("multi-component-levels", multi);
  report["levels"] = rows;

  // The first-level hole (1/3, 4/9) stays empty in a depth-6 product sample.
  auto pts = sample_points(fixtures::cantor_ifs(), 6);
  CompiledExpr tape(b.f);
  bool hole_empty = true;
  for (double x : pts)
    for (double y : pts) {
      double v2 = tape.eval(x, y);
      if (v2 > 1.0 / 3.0 + 1e-9 && v2 < 4.0 / 9.0 - 1e-9) hole_empty = false;
    }
  run.check("hole-stays-empty", hole_empty);
}

void demo_cantor_quotient(DemoRun& run, json& report) {
  PartialBundle b = PartialBundle::of(Expr::parse("x/y"));
  auto xs = sample_points(fixtures::cantor_ifs(), 8);
  auto ys = xs;
  ys.erase(std::remove_if(ys.begin(), ys.end(), [](double v) { return v < 2.0 / 3.0 - 1e-12; }),
           ys.end());
  CoverageScan scan =
      coverage_scan(b, xs, ys, Interval(2.0 / 3.0 - 1e-9, 1.5 + 1e-9));
  run.check("max-gap", scan.max_gap < 0.02, "max gap " + std::to_string(scan.max_gap));
  run.check("reaches-lower-end", scan.min_value <= 2.0 / 3.0 + 1e-6);
  run.check("reaches-upper-end", scan.max_value >= 1.5 - 1e-6);
  report["max_gap"] = scan.max_gap;
  report["window_values"] = scan.count;
  report["min"] = scan.min_value;
  report["max"] = scan.max_value;
}

void demo_cantor_window(DemoRun& run, json& report) {
  CantorConstants c = cantor_constants();
  run.check("ratio-lower", c.ratio_lo == Rat{1, 3});
  run.check("ratio-upper", c.ratio_hi == Rat{1, 1});
  run.check("x-side-form",
            c.x_side_form[0] == Rat{1, 1} && c.x_side_form[1] == Rat{-6, 1} &&
                c.x_side_form[2] == Rat{9, 1});
  run.check("y-side-form",
            c.y_side_form[0] == Rat{1, 1} && c.y_side_form[1] == Rat{-2, 1} &&
                c.y_side_form[2] == Rat{1, 1});
  report["ratio_window"] = {to_string(c.ratio_lo), to_string(c.ratio_hi)};
  report["x_side_form"] = {to_string(c.x_side_form[0]), to_string(c.x_side_form[1]),
                           to_string(c.x_side_form[2])};
  report["y_side_form"] = {to_string(c.y_side_form[0]), to_string(c.y_side_form[1]),
                           to_string(c.y_side_form[2])};
}

void demo_example9(DemoRun& run, json& report) {
  PartialBundle b = PartialBundle::of(fixtures::example9_expr());
  GeneralIFS K = fixtures::mixed_ratio_ifs();
  HomogeneousIFS sub = fixtures::cantor_ifs();
  SandwichResult res = certify_sandwich(b, K, sub, {"1", "3"});
  run.check("certified", res.verdict.certified());
  run.check("hull-image", res.image && std::fabs(res.image->lo) <= 1e-12 &&
                              std::fabs(res.image->hi - 11.5) <= 1e-12);
  report["verdict"] = to_json(res.verdict);
  if (res.image) report["hull_image"] = to_json(*res.image);

  auto pts = sample_points(K, 6);
  CoverageScan scan = coverage_scan(b, pts, pts, Interval(-1e-9, 11.5 + 1e-9));
  run.check("oracle-within-hull", scan.min_value >= -1e-9 && scan.max_value <= 11.5 + 1e-9);
  run.check("oracle-covers-hull", scan.max_gap < 0.05 && scan.min_value <= 1e-6 &&
                                      scan.max_value >= 11.5 - 1e-6,
            "max gap " + std::to_string(scan.max_gap));
  report["oracle_max_gap"] = scan.max_gap;
}

void demo_example10(DemoRun& run, json& report) {
  PartialBundle b = PartialBundle::of(fixtures::example10_expr());
  HomogeneousIFS cantor = fixtures::cantor_ifs();
  Verdict v = certify_ifs(b, cantor, cantor, DomainSpec::unit_square());
  run.check("certified", v.certified());
  report["verdict"] = to_json(v);

  const double hi = std::sin(-0.5) + 18.0;
  LevelFn fn = [&](int k) { return cylinders(cantor, k); };
  LevelImageReport rep = stabilization_report(b, v.sign_case, fn, fn, 8, 1e-9, 1e-9);
  const IntervalSet& top = rep.rows.back().image;
  run.check("image-at-depth-8",
            top.size() == 1 && std::fabs(top.min()) <= 1e-6 && std::fabs(top.max() - hi) <= 1e-6);
  run.check("stabilized", rep.all_stabilized);
  report["expected_hi"] = hi;
  report["image"] = to_json(top);

  SandwichResult res =
      certify_sandwich(b, fixtures::mixed_ratio_ifs(), cantor, {"1", "3"});
  run.check("sandwich-certified", res.verdict.certified() && res.image &&
                                      std::fabs(res.image->hi - hi) <= 1e-12);
}

}  // namespace

std::vector<std::string> demo_names() {
  return {"steinhaus-sum",   "steinhaus-diff", "cantor-product", "cantor-quotient-truncation",
          "corollary7-constants", "example9",  "example10"};
}

RunResult run_demo(const std::string& name) {
  DemoRun run;
  json report;
  report["demo"] = name;
  if (name == "steinhaus-sum") demo_steinhaus_sum(run, report);
  else if (name == "steinhaus-diff") demo_steinhaus_diff(run, report);
  else if (name == "cantor-product") demo_cantor_product(run, report);
  else if (name == "cantor-quotient-truncation") demo_cantor_quotient(run, report);
  else if (name == "corollary7-constants") demo_cantor_window(run, report);
  else if (name == "example9") demo_example9(run, report);
  else if (name == "example10") demo_example10(run, report);
  else throw InvariantError("unknown demo '" + name + "'");

  report["checks"] = run.checks;
  report["pass"] = run.pass;
  RunResult out;
  out.exit_code = run.pass ? 0 : 1;
  out.report = std::move(report);
  std::ostringstream human;
  human << "demo " << name << ": " << (run.pass ? "pass" : "FAIL") << "\n";
  for (const auto& c : out.report["checks"]) {
    human << "  [" << (c["pass"].get<bool>() ? "ok" : "FAIL") << "] "
          << c["name"].get<std::string>();
    if (c.contains("detail")) human << " - " << c["detail"].get<std::string>();
    human << "\n";
  }
  out.human = human.str();
  return out;
}

}  // namespace fractim
