#include "fractim/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace fractim {

namespace {

constexpr std::size_t kPointCap = 10'000'000;
constexpr std::size_t kPairCap = 10'000'000;

std::vector<double> endpoints_of(const std::vector<Interval>& intervals) {
  std::vector<double> pts;
  pts.reserve(intervals.size() * 2);
  for (const Interval& iv : intervals) {
    pts.push_back(iv.lo);
    pts.push_back(iv.hi);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::vector<double> collect_values(const PartialBundle& b, const std::vector<double>& xs,
                                   const std::vector<double>& ys) {
  if (xs.empty() || ys.empty()) throw InvariantError("empty sample list");
  if (xs.size() * ys.size() > kPairCap)
    throw CapacityError("sample pair count exceeds the cap");
  CompiledExpr tape(b.f);
  std::vector<double> values;
  values.reserve(xs.size() * ys.size());
  for (double x : xs)
    for (double y : ys) {
      double v = tape.eval(x, y);
      if (!std::isfinite(v)) throw DomainError("sampled point outside the function domain");
      values.push_back(v);
    }
  std::sort(values.begin(), values.end());
  return values;
}

}  // namespace

std::vector<double> sample_points(const MoranRealization& r, int depth) {
  auto pts = endpoints_of(level_intervals(r, depth));
  if (pts.size() > kPointCap) throw CapacityError("sample count exceeds the cap");
  return pts;
}

std::vector<double> sample_points(const HomogeneousIFS& ifs, int depth) {
  auto pts = endpoints_of(cylinders(ifs, depth));
  if (pts.size() > kPointCap) throw CapacityError("sample count exceeds the cap");
  return pts;
}

std::vector<double> sample_points(const GeneralIFS& ifs, int depth) {
  auto pts = endpoints_of(cylinders(ifs, depth));
  if (pts.size() > kPointCap) throw CapacityError("sample count exceeds the cap");
  return pts;
}

IntervalSet brute_force_image(const PartialBundle& b, const std::vector<double>& xs,
                              const std::vector<double>& ys, double merge_tol) {
  std::vector<double> values = collect_values(b, xs, ys);
  std::vector<Interval> runs;
  double lo = values.front(), hi = values.front();
  for (double v : values) {
    if (v - hi <= merge_tol) {
      hi = v;
    } else {
      runs.push_back(Interval(lo, hi));
      lo = hi = v;
    }
  }
  runs.push_back(Interval(lo, hi));
  return normalize(std::move(runs), merge_tol);
}

OracleComparison compare_images(const IntervalSet& oracle, const IntervalSet& exact, double tol) {
  OracleComparison out;
  out.contained = subset_of(oracle, exact, tol);
  out.hausdorff = hausdorff_distance(oracle, exact);
  return out;
}

CoverageScan coverage_scan(const PartialBundle& b, const std::vector<double>& xs,
                           const std::vector<double>& ys, const Interval& window) {
  std::vector<double> values = collect_values(b, xs, ys);
  CoverageScan scan;
  bool first = true;
  double prev = 0.0;
  for (double v : values) {
    if (v < window.lo || v > window.hi) continue;
    if (first) {
      scan.min_value = scan.max_value = v;
      first = false;
    } else {
      scan.max_gap = std::max(scan.max_gap, v - prev);
      scan.max_value = v;
    }
    prev = v;
    ++scan.count;
  }
  if (first) throw InvariantError("no sampled values inside the window");
  return scan;
}

}  // namespace fractim
