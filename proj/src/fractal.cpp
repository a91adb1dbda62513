#include "fractim/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace fractim {

namespace {

Scalar one() { return Scalar::rational(1, 1); }
Scalar two() { return Scalar::rational(2, 1); }

double uniform01(std::mt19937_64& rng) {
  // Portable: uniform_real_distribution output is implementation-defined.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

MoranClass::MoranClass(PeriodicSeq<Scalar> c, PeriodicSeq<int> n, Scalar overlap_limit)
    : contraction(std::move(c)), branching(std::move(n)), overlap(overlap_limit) {
  if (contraction.period.empty() || branching.period.empty())
    throw InvariantError("class sequences need a nonempty period");
  if (overlap.v < 0.0 || scalar_cmp(overlap, one()) >= 0)
    throw InvariantError("overlap limit must lie in [0, 1)");
  for (int k = 1; k <= levels_to_enumerate(); ++k) {
    const Scalar& ck = contraction_at(k);
    int nk = branching_at(k);
    if (!(ck.v > 0.0) || scalar_cmp(ck, Scalar::rational(1, 2)) >= 0)
      throw InvariantError("contraction ratios must lie in (0, 1/2)");
    if (nk < 2) throw InvariantError("branching must be at least 2");
    // c_k n_k < 1 also makes every packing feasible:
    // (n_k-1) c_k (1-overlap) <= (n_k-1) c_k < 1 - c_k.
    if (scalar_cmp(ck * Scalar::rational(nk, 1), one()) >= 0)
      throw InvariantError("contraction times branching must stay below 1");
  }
}

int MoranClass::levels_to_enumerate() const {
  int settle = std::max(contraction.settle(), branching.settle());
  int cycle = static_cast<int>(std::lcm(contraction.cycle(), branching.cycle()));
  return settle + cycle;
}

bool MoranClass::operator==(const MoranClass& other) const {
  auto seq_eq = [](const PeriodicSeq<Scalar>& a, const PeriodicSeq<Scalar>& b) {
    if (a.pre.size() != b.pre.size() || a.period.size() != b.period.size()) return false;
    for (std::size_t i = 0; i < a.pre.size(); ++i)
      if (!scalar_eq(a.pre[i], b.pre[i])) return false;
    for (std::size_t i = 0; i < a.period.size(); ++i)
      if (!scalar_eq(a.period[i], b.period[i])) return false;
    return true;
  };
  return seq_eq(contraction, other.contraction) && branching.pre == other.branching.pre &&
         branching.period == other.branching.period && scalar_eq(overlap, other.overlap);
}

Scalar packed_span_ratio(const MoranClass& cls, int k) {
  const Scalar& c = cls.contraction_at(k);
  Scalar n_minus_2 = Scalar::rational(cls.branching_at(k) - 2, 1);
  return c * (two() + n_minus_2 * (one() - cls.overlap));
}

LevelSummary distinct_levels(const MoranClass& cls) {
  LevelSummary out;
  for (int k = 1; k <= cls.levels_to_enumerate(); ++k) {
    const Scalar& c = cls.contraction_at(k);
    int n = cls.branching_at(k);
    bool seen = false;
    for (const LevelParams& lp : out.levels)
      if (lp.n == n && scalar_eq(lp.c, c)) {
        seen = true;
        break;
      }
    if (!seen) out.levels.push_back(LevelParams{c, n, packed_span_ratio(cls, k)});
  }
  out.ratio_lo = one() - out.levels.front().span;
  out.ratio_hi = out.levels.front().c / (one() - out.levels.front().span);
  out.unit_slope_covers = true;
  for (const LevelParams& lp : out.levels) {
    Scalar lo_k = one() - lp.span;
    Scalar hi_k = lp.c / (one() - lp.span);
    if (scalar_cmp(lo_k, out.ratio_lo) > 0) out.ratio_lo = lo_k;
    if (scalar_cmp(hi_k, out.ratio_hi) < 0) out.ratio_hi = hi_k;
    // Provable c + span >= 1; pads the double path so the flag stays safe.
    Scalar sum = lp.c + lp.span;
    bool ge1 = sum.has_exact() ? rat_cmp(*sum.exact, Rat{1, 1}) >= 0 : pad_down(sum.v, 4) >= 1.0;
    out.unit_slope_covers = out.unit_slope_covers && ge1;
  }
  return out;
}

double ratio_lo_upper(const MoranClass& cls) {
  double worst = 0.0;
  for (int k = 1; k <= cls.levels_to_enumerate(); ++k) {
    Scalar lo = one() - packed_span_ratio(cls, k);
    double lo_k = lo.has_exact() ? lo.exact->to_double_up() : pad_up(lo.v, 4);
    worst = std::max(worst, lo_k);
  }
  return worst;
}

double ratio_hi_lower(const MoranClass& cls) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= cls.levels_to_enumerate(); ++k) {
    Scalar c = cls.contraction_at(k);
    Scalar hi = c / (one() - packed_span_ratio(cls, k));
    double hi_k = hi.has_exact() ? hi.exact->to_double_down() : pad_down(hi.v, 6);
    best = std::min(best, hi_k);
  }
  return best;
}

Placement placement_from_string(const std::string& name) {
  if (name == "uniform") return Placement::Uniform;
  if (name == "extreme_left_packed") return Placement::PackedLeft;
  if (name == "random") return Placement::Random;
  throw InvariantError("unknown placement strategy '" + name + "'");
}

const char* to_string(Placement p) {
  switch (p) {
    case Placement::Uniform: return "uniform";
    case Placement::PackedLeft: return "extreme_left_packed";
    case Placement::Random: return "random";
  }
  return "?";
}

namespace {

std::vector<double> place_children(const MoranClass& cls, int k, Placement strategy,
                                   std::mt19937_64& rng) {
  const double c = cls.contraction_at(k).v;
  const int n = cls.branching_at(k);
  const double last = 1.0 - c;
  const double min_step = c * (1.0 - cls.overlap.v);
  std::vector<double> offs(n);
  offs.front() = 0.0;
  offs.back() = last;
  switch (strategy) {
    case Placement::Uniform:
      for (int j = 1; j < n - 1; ++j) offs[j] = last * (static_cast<double>(j) / (n - 1));
      break;
    case Placement::PackedLeft:
      // First n-1 children overlap each successor by exactly overlap*c;
      // the block then spans (1 + (n-2)(1-overlap)) * c.
      for (int j = 1; j < n - 1; ++j) offs[j] = static_cast<double>(j) * min_step;
      break;
    case Placement::Random: {
      const int free_count = n - 2;
      if (free_count > 0) {
        for (int attempt = 0;; ++attempt) {
          if (attempt >= 10000)
            throw CapacityError("rejection sampling of child offsets exceeded 10000 retries");
          std::vector<double> inner(free_count);
          for (double& u : inner) u = uniform01(rng) * last;
          std::sort(inner.begin(), inner.end());
          bool ok = inner.front() >= min_step && last - inner.back() >= min_step;
          for (int j = 1; ok && j < free_count; ++j)
            ok = inner[j] - inner[j - 1] >= min_step;
          if (!ok) continue;
          std::copy(inner.begin(), inner.end(), offs.begin() + 1);
          break;
        }
      }
      break;
    }
  }
  return offs;
}

}  // namespace

MoranRealization realize(const MoranClass& cls, int depth, Placement strategy,
                         std::uint64_t seed) {
  if (depth < 1) throw InvariantError("realization depth must be at least 1");
  MoranRealization r{cls, depth, {}};
  std::mt19937_64 rng(seed);
  std::size_t parents = 1;
  for (int k = 1; k <= depth; ++k) {
    std::vector<std::vector<double>> level;
    level.reserve(parents);
    for (std::size_t p = 0; p < parents; ++p) level.push_back(place_children(cls, k, strategy, rng));
    r.offsets.push_back(std::move(level));
    parents *= static_cast<std::size_t>(cls.branching_at(k));
    if (parents > 20'000'000ull) throw CapacityError("realization would exceed the interval cap");
  }
  return r;
}

std::vector<Interval> level_intervals(const MoranRealization& r, int k) {
  if (k < 0 || k > r.depth) throw InvariantError("level out of range for this realization");
  std::vector<Interval> current{Interval(0.0, 1.0)};
  double width = 1.0;
  for (int level = 1; level <= k; ++level) {
    const double child_width = width * r.cls.contraction_at(level).v;
    const auto& per_parent = r.offsets[level - 1];
    std::vector<Interval> next;
    next.reserve(current.size() * per_parent.front().size());
    for (std::size_t p = 0; p < current.size(); ++p) {
      for (double off : per_parent[p]) {
        double lo = current[p].lo + off * width;
        next.push_back(Interval(lo, lo + child_width));
      }
    }
    current = std::move(next);
    width = child_width;
  }
  return current;
}

HomogeneousIFS::HomogeneousIFS(Scalar ratio_, std::vector<Scalar> shifts_)
    : ratio(ratio_), shifts(std::move(shifts_)) {
  if (!(ratio.v > 0.0) || scalar_cmp(ratio, one()) >= 0)
    throw InvariantError("contraction ratio must lie in (0, 1)");
  if (shifts.size() < 2) throw InvariantError("need at least two maps");
  for (std::size_t i = 1; i < shifts.size(); ++i)
    if (scalar_cmp(shifts[i - 1], shifts[i]) > 0)
      throw InvariantError("shifts must be sorted");
  Scalar right = shifts.back() + ratio;
  // Exact pinning when the rationals say so; 1e-12 slack keeps hulls
  // expressed in rounded doubles constructible.
  bool left_ok = (shifts.front().has_exact() && shifts.front().exact->is_zero()) ||
                 std::fabs(shifts.front().v) <= 1e-12;
  bool right_ok = (right.has_exact() && rat_cmp(*right.exact, Rat{1, 1}) == 0) ||
                  std::fabs(right.v - 1.0) <= 1e-12;
  if (!left_ok || !right_ok) throw InvariantError("hull must be pinned to [0, 1]");
}

GeneralIFS::GeneralIFS(std::vector<AffineMap> maps_) : maps(std::move(maps_)) {
  if (maps.size() < 2) throw InvariantError("need at least two maps");
  Scalar lo = maps.front().shift;
  Scalar hi = maps.front().ratio + maps.front().shift;
  for (const AffineMap& m : maps) {
    if (!(m.ratio.v > 0.0) || scalar_cmp(m.ratio, one()) >= 0)
      throw InvariantError("contraction ratios must lie in (0, 1)");
    if (scalar_cmp(m.shift, lo) < 0) lo = m.shift;
    Scalar right = m.ratio + m.shift;
    if (scalar_cmp(right, hi) > 0) hi = right;
  }
  bool left_ok = (lo.has_exact() && lo.exact->is_zero()) || std::fabs(lo.v) <= 1e-12;
  bool right_ok =
      (hi.has_exact() && rat_cmp(*hi.exact, Rat{1, 1}) == 0) || std::fabs(hi.v - 1.0) <= 1e-12;
  if (!left_ok || !right_ok) throw InvariantError("hull must be pinned to [0, 1]");
}

namespace {

constexpr std::size_t kCylinderCap = 10'000'000;

}  // namespace

std::vector<Interval> cylinders(const HomogeneousIFS& ifs, int k) {
  if (k < 0) throw InvariantError("cylinder level must be nonnegative");
  std::vector<double> shifts{0.0};
  double scale = 1.0;
  for (int level = 0; level < k; ++level) {
    if (shifts.size() * ifs.size() > kCylinderCap)
      throw CapacityError("cylinder count exceeds the cap");
    std::vector<double> next;
    next.reserve(shifts.size() * ifs.size());
    for (const Scalar& a : ifs.shifts)
      for (double s : shifts) next.push_back(a.v + ifs.ratio.v * s);
    shifts = std::move(next);
    scale *= ifs.ratio.v;
  }
  std::vector<Interval> out;
  out.reserve(shifts.size());
  for (double s : shifts) out.push_back(Interval(s, s + scale));
  return out;
}

std::vector<Interval> cylinders(const GeneralIFS& ifs, int k) {
  if (k < 0) throw InvariantError("cylinder level must be nonnegative");
  std::vector<std::pair<double, double>> words{{1.0, 0.0}};  // (ratio, shift)
  for (int level = 0; level < k; ++level) {
    if (words.size() * ifs.size() > kCylinderCap)
      throw CapacityError("cylinder count exceeds the cap");
    std::vector<std::pair<double, double>> next;
    next.reserve(words.size() * ifs.size());
    for (const AffineMap& m : ifs.maps)
      for (const auto& [r, s] : words) next.push_back({m.ratio.v * r, m.shift.v + m.ratio.v * s});
    words = std::move(next);
  }
  std::vector<Interval> out;
  out.reserve(words.size());
  for (const auto& [r, s] : words) out.push_back(Interval(s, s + r));
  return out;
}

GapProfile gap_profile(const HomogeneousIFS& ifs) {
  GapProfile out;
  out.max_gap = Scalar::of(0.0);
  for (std::size_t i = 0; i + 1 < ifs.shifts.size(); ++i) {
    // left end of map i+1's cylinder minus right end of map i's
    Scalar g = ifs.shifts[i + 1] - ifs.shifts[i] - ifs.ratio;
    out.adjacent.push_back({static_cast<int>(i) + 1, g});
    bool positive = g.has_exact() ? g.exact->num > 0 : g.v > 0.0;
    if (positive) {
      out.open_indices.push_back(static_cast<int>(i) + 1);
      if (scalar_cmp(g, out.max_gap) > 0) out.max_gap = g;
    }
  }
  if (out.open_indices.empty())
    throw InvariantError("no positive gap: the attractor is the whole interval");
  return out;
}

bool verify_sub_ifs(const GeneralIFS& K, const HomogeneousIFS& sub,
                    const std::vector<std::string>& words) {
  if (words.size() != sub.size())
    throw InvariantError("need exactly one word per map of the candidate sub-IFS");
  for (std::size_t t = 0; t < words.size(); ++t) {
    const std::string& w = words[t];
    if (w.empty()) throw InvariantError("empty word");
    // Compose K's maps along the word, outermost index first.
    Scalar ratio = Scalar::rational(1, 1);
    Scalar shift = Scalar::rational(0, 1);
    for (char ch : w) {
      if (ch < '1' || ch > '9') throw InvariantError("word characters must be map indices 1-9");
      std::size_t idx = static_cast<std::size_t>(ch - '1');
      if (idx >= K.size()) throw InvariantError("word index out of range");
      const AffineMap& m = K.maps[idx];
      // previous composition g, new = g o m : x -> g.ratio*(m(x)) + g.shift
      shift = shift + ratio * m.shift;
      ratio = ratio * m.ratio;
    }
    const Scalar& want_ratio = sub.ratio;
    const Scalar& want_shift = sub.shifts[t];
    bool ratio_ok, shift_ok;
    if (ratio.has_exact() && want_ratio.has_exact())
      ratio_ok = rat_cmp(*ratio.exact, *want_ratio.exact) == 0;
    else
      ratio_ok = std::fabs(ratio.v - want_ratio.v) <= 1e-12;
    if (shift.has_exact() && want_shift.has_exact())
      shift_ok = rat_cmp(*shift.exact, *want_shift.exact) == 0;
    else
      shift_ok = std::fabs(shift.v - want_shift.v) <= 1e-12;
    if (!ratio_ok || !shift_ok) return false;
  }
  return true;
}

}  // namespace fractim
