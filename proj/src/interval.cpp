#include "fractim/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fractim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dn(double v) { return std::nextafter(v, -kInf); }
double up(double v) { return std::nextafter(v, kInf); }

// Product endpoint rounded down/up; exact cases skip the pad.
double mul_dn(double x, double y) {
  if (x == 0.0 || y == 0.0) return 0.0;
  if (x == 1.0) return y;
  if (y == 1.0) return x;
  if (x == -1.0) return -y;
  if (y == -1.0) return -x;
  return dn(x * y);
}

double mul_up(double x, double y) {
  if (x == 0.0 || y == 0.0) return 0.0;
  if (x == 1.0) return y;
  if (y == 1.0) return x;
  if (x == -1.0) return -y;
  if (y == -1.0) return -x;
  return up(x * y);
}

double div_dn(double x, double y) {
  if (x == 0.0) return 0.0;
  if (y == 1.0) return x;
  if (y == -1.0) return -x;
  return dn(x / y);
}

double div_up(double x, double y) {
  if (x == 0.0) return 0.0;
  if (y == 1.0) return x;
  if (y == -1.0) return -x;
  return up(x / y);
}

void check_finite(const Interval& r, const char* what) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi))
    throw DomainError(std::string("non-finite enclosure in ") + what);
}

}  // namespace

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!(std::isfinite(lo) && std::isfinite(hi)))
    throw InvariantError("interval endpoints must be finite");
  if (lo > hi) throw InvariantError("interval lo exceeds hi");
}

Interval Interval::hull(double a, double b) { return a <= b ? Interval(a, b) : Interval(b, a); }

bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }

std::string to_string(const Interval& a) {
  return "[" + std::to_string(a.lo) + ", " + std::to_string(a.hi) + "]";
}

namespace enclose {

Interval add(const Interval& a, const Interval& b) {
  double lo = a.lo + b.lo;
  double hi = a.hi + b.hi;
  // A floating sum/difference that lands exactly on zero is exact.
  if (lo != 0.0) lo = dn(lo);
  if (hi != 0.0) hi = up(hi);
  Interval r{};
  r.lo = lo;
  r.hi = hi;
  check_finite(r, "add");
  return r;
}

Interval sub(const Interval& a, const Interval& b) {
  double lo = a.lo - b.hi;
  double hi = a.hi - b.lo;
  if (lo != 0.0) lo = dn(lo);
  if (hi != 0.0) hi = up(hi);
  Interval r{};
  r.lo = lo;
  r.hi = hi;
  check_finite(r, "sub");
  return r;
}

Interval mul(const Interval& a, const Interval& b) {
  const double los[4] = {mul_dn(a.lo, b.lo), mul_dn(a.lo, b.hi), mul_dn(a.hi, b.lo),
                         mul_dn(a.hi, b.hi)};
  const double his[4] = {mul_up(a.lo, b.lo), mul_up(a.lo, b.hi), mul_up(a.hi, b.lo),
                         mul_up(a.hi, b.hi)};
  Interval r{};
  r.lo = *std::min_element(los, los + 4);
  r.hi = *std::max_element(his, his + 4);
  check_finite(r, "mul");
  return r;
}

Interval div(const Interval& a, const Interval& b) {
  if (b.lo <= 0.0 && 0.0 <= b.hi) throw DomainError("division by an interval containing zero");
  const double los[4] = {div_dn(a.lo, b.lo), div_dn(a.lo, b.hi), div_dn(a.hi, b.lo),
                         div_dn(a.hi, b.hi)};
  const double his[4] = {div_up(a.lo, b.lo), div_up(a.lo, b.hi), div_up(a.hi, b.lo),
                         div_up(a.hi, b.hi)};
  Interval r{};
  r.lo = *std::min_element(los, los + 4);
  r.hi = *std::max_element(his, his + 4);
  check_finite(r, "div");
  return r;
}

Interval neg(const Interval& a) {
  Interval r{};
  r.lo = -a.hi;
  r.hi = -a.lo;
  return r;
}

Interval scale(double c, const Interval& a) {
  if (c == 0.0) return Interval(0.0, 0.0);
  if (c == 1.0) return a;
  if (c == -1.0) return neg(a);
  Interval r{};
  if (c > 0.0) {
    r.lo = mul_dn(c, a.lo);
    r.hi = mul_up(c, a.hi);
  } else {
    r.lo = mul_dn(c, a.hi);
    r.hi = mul_up(c, a.lo);
  }
  check_finite(r, "scale");
  return r;
}

}  // namespace enclose

double IntervalSet::min() const {
  if (items_.empty()) throw InvariantError("min of empty interval set");
  return items_.front().lo;
}

double IntervalSet::max() const {
  if (items_.empty()) throw InvariantError("max of empty interval set");
  return items_.back().hi;
}

IntervalSet IntervalSet::from_sorted_disjoint(std::vector<Interval> items, double merge_tol) {
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (items[i].lo - items[i - 1].hi <= merge_tol)
      throw InvariantError("intervals not disjoint beyond the merge tolerance");
  }
  IntervalSet s;
  s.items_ = std::move(items);
  return s;
}

IntervalSet normalize(std::vector<Interval> raw, double merge_tol) {
  if (raw.empty()) throw InvariantError("normalize: empty input");
  if (merge_tol < 0.0) throw InvariantError("normalize: negative merge tolerance");
  std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  IntervalSet out;
  out.items_.push_back(raw.front());
  for (std::size_t i = 1; i < raw.size(); ++i) {
    Interval& cur = out.items_.back();
    if (raw[i].lo - cur.hi <= merge_tol) {
      cur.hi = std::max(cur.hi, raw[i].hi);
    } else {
      out.items_.push_back(raw[i]);
    }
  }
  return out;
}

std::size_t component_count(const IntervalSet& a) { return a.size(); }

bool set_equal(const IntervalSet& a, const IntervalSet& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::fabs(a.items()[i].lo - b.items()[i].lo) > tol) return false;
    if (std::fabs(a.items()[i].hi - b.items()[i].hi) > tol) return false;
  }
  return true;
}

bool subset_of(const IntervalSet& a, const IntervalSet& b, double tol) {
  for (const Interval& comp : a.items()) {
    // Walk b's components enlarged by tol until comp is covered.
    double pos = comp.lo;
    bool covered = false;
    for (const Interval& cover : b.items()) {
      if (cover.hi + tol < pos) continue;
      if (cover.lo - tol > pos) break;  // gap in front of pos
      pos = std::max(pos, cover.hi + tol);
      if (pos >= comp.hi) {
        covered = true;
        break;
      }
    }
    if (!covered && pos < comp.hi) return false;
  }
  return true;
}

namespace {

double distance_to_set(double x, const IntervalSet& s) {
  double best = kInf;
  for (const Interval& c : s.items()) {
    if (c.contains(x)) return 0.0;
    best = std::min(best, std::min(std::fabs(x - c.lo), std::fabs(x - c.hi)));
  }
  return best;
}

// sup over points of a of the distance to b: attained at a's endpoints or at
// midpoints of b's gaps that fall inside a.
double directed_hausdorff(const IntervalSet& a, const IntervalSet& b) {
  double worst = 0.0;
  for (const Interval& c : a.items()) {
    worst = std::max(worst, distance_to_set(c.lo, b));
    worst = std::max(worst, distance_to_set(c.hi, b));
  }
  const auto& bi = b.items();
  for (std::size_t g = 1; g < bi.size(); ++g) {
    double m = bi[g - 1].hi + (bi[g].lo - bi[g - 1].hi) / 2.0;
    for (const Interval& c : a.items()) {
      if (c.contains(m)) {
        worst = std::max(worst, distance_to_set(m, b));
        break;
      }
    }
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const IntervalSet& a, const IntervalSet& b) {
  if (a.empty() || b.empty()) throw InvariantError("hausdorff distance of empty set");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

}  // namespace fractim
