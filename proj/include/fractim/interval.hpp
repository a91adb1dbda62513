#pragma once

#include <cstddef>
#include <vector>

#include "fractim/errors.hpp"

namespace fractim {

// Closed interval with finite endpoints.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double lo, double hi);
  static Interval hull(double a, double b);  // unordered endpoints
  static Interval point(double v) { return Interval(v, v); }

  double width() const { return hi - lo; }
  double mid() const { return lo + (hi - lo) / 2.0; }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool encloses(const Interval& inner) const { return lo <= inner.lo && inner.hi <= hi; }
  bool is_point() const { return lo == hi; }
};

bool operator==(const Interval& a, const Interval& b);
std::string to_string(const Interval& a);

// Outward-conservative interval arithmetic. Every operation pads each
// endpoint by one nextafter step except for results IEEE-754 guarantees
// exact: sums/differences that are exactly zero, products with a factor of
// exactly 0 or +/-1, quotients by +/-1. Those carve-outs let identically-zero
// and boundary-tight quantities certify closed inequalities.
namespace enclose {
Interval add(const Interval& a, const Interval& b);
Interval sub(const Interval& a, const Interval& b);
Interval mul(const Interval& a, const Interval& b);
Interval div(const Interval& a, const Interval& b);  // throws DomainError if 0 in b
Interval neg(const Interval& a);
Interval scale(double c, const Interval& a);
}  // namespace enclose

// Normalized finite union of disjoint closed intervals, sorted by lo, with
// every gap strictly wider than the merge tolerance it was built with.
class IntervalSet {
 public:
  IntervalSet() = default;

  const std::vector<Interval>& items() const { return items_; }
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  double min() const;
  double max() const;

  // Trusts that `items` already satisfies the invariants (validated).
  static IntervalSet from_sorted_disjoint(std::vector<Interval> items, double merge_tol);

 private:
  std::vector<Interval> items_;
  friend IntervalSet normalize(std::vector<Interval>, double);
};

// Sort by lo and merge every pair whose gap is <= merge_tol.
IntervalSet normalize(std::vector<Interval> raw, double merge_tol);

std::size_t component_count(const IntervalSet& a);

// Same component count and corresponding endpoints within tol (inclusive,
// so tol = 0 is exact equality).
bool set_equal(const IntervalSet& a, const IntervalSet& b, double tol);

// Every point of a lies within tol of the union of b.
bool subset_of(const IntervalSet& a, const IntervalSet& b, double tol);

double hausdorff_distance(const IntervalSet& a, const IntervalSet& b);

}  // namespace fractim
