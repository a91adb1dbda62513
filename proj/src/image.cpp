#include "fractim/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>

namespace fractim {

Interval box_image(const PartialBundle& b, SignCase sc, const Box& box) {
  double lo, hi;
  switch (sc) {
    case SignCase::PP:
      lo = b.f.eval(box.x.lo, box.y.lo);
      hi = b.f.eval(box.x.hi, box.y.hi);
      break;
    case SignCase::NN:
      lo = b.f.eval(box.x.hi, box.y.hi);
      hi = b.f.eval(box.x.lo, box.y.lo);
      break;
    case SignCase::NP:
      lo = b.f.eval(box.x.hi, box.y.lo);
      hi = b.f.eval(box.x.lo, box.y.hi);
      break;
    case SignCase::PN:
      lo = b.f.eval(box.x.lo, box.y.hi);
      hi = b.f.eval(box.x.hi, box.y.lo);
      break;
    default:
      throw Error("bad sign case");
  }
  return Interval::hull(lo, hi);
}

Interval box_image_corners(const PartialBundle& b, const Box& box) {
  const double vals[4] = {b.f.eval(box.x.lo, box.y.lo), b.f.eval(box.x.lo, box.y.hi),
                          b.f.eval(box.x.hi, box.y.lo), b.f.eval(box.x.hi, box.y.hi)};
  return Interval(*std::min_element(vals, vals + 4), *std::max_element(vals, vals + 4));
}

namespace {

struct StreamHead {
  double lo, hi;
  std::uint32_t stream;
  std::uint32_t pos;
};

struct HeadGreater {
  bool operator()(const StreamHead& a, const StreamHead& b) const {
    if (a.lo != b.lo) return a.lo > b.lo;
    return a.stream > b.stream;
  }
};

}  // namespace

IntervalSet level_image(const PartialBundle& b, std::optional<SignCase> sc,
                        const std::vector<Interval>& C, const std::vector<Interval>& D,
                        double merge_tol) {
  if (C.empty() || D.empty()) throw InvariantError("level image needs nonempty interval lists");
  if (!sc) {
    std::vector<Interval> images;
    images.reserve(C.size() * D.size());
    for (const Interval& cx : C)
      for (const Interval& dy : D) images.push_back(box_image_corners(b, Box{cx, dy}));
    return normalize(std::move(images), merge_tol);
  }

  // One stream per x-interval; iterating the sorted y-intervals in the
  // direction induced by the sign case makes each stream's image lows
  // monotone, so a k-way merge emits the union in sorted order.
  const SignCase c = *sc;
  std::vector<Interval> ys(D);
  std::sort(ys.begin(), ys.end(), [](const Interval& a, const Interval& b2) {
    return a.lo < b2.lo || (a.lo == b2.lo && a.hi < b2.hi);
  });
  const bool ascending = (c == SignCase::PP || c == SignCase::NP);
  if (!ascending) std::reverse(ys.begin(), ys.end());

  CompiledExpr tape(b.f);
  auto image_of = [&](std::uint32_t i, std::uint32_t j) {
    const Interval& ix = C[i];
    const Interval& jy = ys[j];
    double lo, hi;
    switch (c) {
      case SignCase::PP:
        lo = tape.eval(ix.lo, jy.lo);
        hi = tape.eval(ix.hi, jy.hi);
        break;
      case SignCase::NN:
        lo = tape.eval(ix.hi, jy.hi);
        hi = tape.eval(ix.lo, jy.lo);
        break;
      case SignCase::NP:
        lo = tape.eval(ix.hi, jy.lo);
        hi = tape.eval(ix.lo, jy.hi);
        break;
      default:  // PN
        lo = tape.eval(ix.lo, jy.hi);
        hi = tape.eval(ix.hi, jy.lo);
        break;
    }
    if (lo > hi) std::swap(lo, hi);  // float wobble on near-degenerate boxes
    return std::pair<double, double>{lo, hi};
  };

  std::priority_queue<StreamHead, std::vector<StreamHead>, HeadGreater> heap;
  for (std::uint32_t i = 0; i < C.size(); ++i) {
    auto [lo, hi] = image_of(i, 0);
    heap.push(StreamHead{lo, hi, i, 0});
  }
  std::vector<Interval> merged;
  double cur_lo = 0.0, cur_hi = 0.0;
  bool have_cur = false;
  while (!heap.empty()) {
    StreamHead h = heap.top();
    heap.pop();
    if (!have_cur) {
      cur_lo = h.lo;
      cur_hi = h.hi;
      have_cur = true;
    } else if (h.lo - cur_hi <= merge_tol) {
      cur_hi = std::max(cur_hi, h.hi);
    } else {
      merged.push_back(Interval(cur_lo, cur_hi));
      cur_lo = h.lo;
      cur_hi = h.hi;
    }
    if (h.pos + 1 < ys.size()) {
      auto [lo, hi] = image_of(h.stream, h.pos + 1);
      heap.push(StreamHead{lo, hi, h.stream, h.pos + 1});
    }
  }
  merged.push_back(Interval(cur_lo, cur_hi));
  // Components are few; re-normalizing canonicalizes any ulp-level
  // out-of-order emission from the monotonicity assumption.
  return normalize(std::move(merged), merge_tol);
}

Interval hull_image(const PartialBundle& b, SignCase sc) {
  return box_image(b, sc, Box{Interval(0.0, 1.0), Interval(0.0, 1.0)});
}

LevelImageReport stabilization_report(const PartialBundle& b, std::optional<SignCase> sc,
                                      const LevelFn& C, const LevelFn& D, int k_max, double tol,
                                      double merge_tol) {
  if (k_max < 0) throw InvariantError("k_max must be nonnegative");
  LevelImageReport rep;
  for (int k = 0; k <= k_max; ++k) {
    LevelImageRow row;
    row.k = k;
    row.image = level_image(b, sc, C(k), D(k), merge_tol);
    row.components = row.image.size();
    if (k > 0) {
      const IntervalSet& prev = rep.rows.back().image;
      row.hausdorff_prev = hausdorff_distance(row.image, prev);
      row.nested_in_prev = subset_of(row.image, prev, tol);
      rep.rows.back().stabilized_next = set_equal(prev, row.image, tol);
      rep.all_stabilized = rep.all_stabilized && rep.rows.back().stabilized_next;
      rep.all_nested = rep.all_nested && row.nested_in_prev;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

namespace {

Scalar scalar_int(long long v) { return Scalar::rational(v, 1); }

FixturePair make_pair(Scalar hx, Scalar hy, Scalar lx, Scalar ly, Scalar l1, Scalar l2,
                      SignCase sc, int k) {
  FixturePair p;
  p.hi = FixturePoint{hx, hy};
  p.lo = FixturePoint{lx, ly};
  p.l1 = l1;
  p.l2 = l2;
  p.sc = sc;
  p.k = k;
  return p;
}

std::vector<Scalar> sample_range(const Scalar& lo, const Scalar& hi, int count) {
  std::vector<Scalar> out;
  if (count <= 1) {
    out.push_back(lo + (hi - lo) * Scalar::rational(1, 2));
    return out;
  }
  for (int t = 0; t < count; ++t)
    out.push_back(lo + (hi - lo) * Scalar::rational(t, count - 1));
  return out;
}

}  // namespace

std::vector<FixturePair> extreme_pairs(const MoranClass& cls, int k, SignCase sc,
                                       int x0_samples) {
  if (k < 1) throw InvariantError("fixture level must be at least 1");
  const Scalar one = scalar_int(1);
  const Scalar zero = scalar_int(0);
  Scalar cp_km1 = one;
  for (int j = 1; j < k; ++j) cp_km1 = cp_km1 * cls.contraction_at(j);
  const Scalar ck = cls.contraction_at(k);
  const Scalar cp_k = cp_km1 * ck;
  const int n = cls.branching_at(k);
  const Scalar om = one - cls.overlap;                       // 1 - kappa
  const Scalar pack = one + scalar_int(n - 2) * om;          // 1 + (n-2)(1-kappa)
  const Scalar spanfac = scalar_int(2) + scalar_int(n - 2) * om;
  const Scalar block = pack * cp_k;                          // packed block span
  const Scalar edge = cp_km1 - cp_k;                         // parent length minus child

  std::vector<FixturePair> out;
  const Scalar lo_pp = cp_k, hi_pp = cp_km1;
  const Scalar lo_other = zero, hi_other = edge;

  switch (sc) {
    case SignCase::PP: {
      const Scalar l2 = cp_km1 * (ck * pack - (one - ck));
      for (const Scalar& x0 : sample_range(lo_pp, hi_pp, x0_samples))
        out.push_back(make_pair(x0, block, x0 - cp_k, edge, cp_k, l2, sc, k));
      const Scalar l3 = cp_km1 * (spanfac * ck - one);
      out.push_back(make_pair(block, cp_km1, edge, zero, l3, cp_km1, sc, k));
      break;
    }
    case SignCase::NN: {
      const Scalar l6 = scalar_neg(cp_km1 * (ck * spanfac - one));
      for (const Scalar& x0 : sample_range(lo_other, hi_other, x0_samples))
        out.push_back(make_pair(x0, edge, x0 + cp_k, block, scalar_neg(cp_k), l6, sc, k));
      const Scalar l7 = cp_km1 * (one - ck * spanfac);
      out.push_back(make_pair(edge, zero, block, cp_km1, l7, scalar_neg(cp_km1), sc, k));
      break;
    }
    case SignCase::NP: {
      const Scalar l10 = cp_km1 * (ck * spanfac - one);
      for (const Scalar& x0 : sample_range(lo_other, hi_other, x0_samples))
        out.push_back(make_pair(x0, block, x0 + cp_k, edge, scalar_neg(cp_k), l10, sc, k));
      const Scalar l11 = scalar_neg(cp_km1 * (ck * spanfac - one));
      out.push_back(make_pair(edge, cp_km1, block, zero, l11, cp_km1, sc, k));
      break;
    }
    case SignCase::PN: {
      const Scalar l14 = cp_km1 * (one - ck * spanfac);
      for (const Scalar& x0 : sample_range(lo_other, hi_other, x0_samples))
        out.push_back(make_pair(x0 + cp_k, edge, x0, block, cp_k, l14, sc, k));
      const Scalar l15 = cp_km1 * (ck * spanfac - one);
      out.push_back(make_pair(block, zero, edge, cp_km1, l15, scalar_neg(cp_km1), sc, k));
      break;
    }
  }
  return out;
}

namespace {

// Composed map of the length-`len` word with index `idx` (base-n digits,
// most significant first): x -> scale * x + shift.
std::pair<Scalar, Scalar> word_map(const HomogeneousIFS& ifs, int len, long long idx) {
  Scalar scale = Scalar::rational(1, 1);
  Scalar shift = Scalar::rational(0, 1);
  const long long n = static_cast<long long>(ifs.size());
  std::vector<int> digits(len);
  for (int d = len - 1; d >= 0; --d) {
    digits[d] = static_cast<int>(idx % n);
    idx /= n;
  }
  for (int d = 0; d < len; ++d) {
    shift = shift + scale * ifs.shifts[digits[d]];
    scale = scale * ifs.ratio;
  }
  return {scale, shift};
}

}  // namespace

std::vector<FixturePair> ifs_extreme_pairs(const HomogeneousIFS& k1, const HomogeneousIFS& k2,
                                           int k, SignCase sc) {
  if (k < 1) throw InvariantError("fixture level must be at least 1");
  if (!scalar_eq(k1.ratio, k2.ratio))
    throw InvariantError("the two IFS must share one contraction ratio");
  const Scalar lam = k1.ratio;
  const Scalar lam_km1 = scalar_pow(lam, k - 1);
  const Scalar lam_k = lam_km1 * lam;
  const long long n = static_cast<long long>(k1.size());
  const long long m = static_cast<long long>(k2.size());
  long long count1 = 1, count2 = 1;
  for (int t = 0; t < k - 1; ++t) {
    count1 *= n;
    count2 *= m;
  }
  const long long combos = count1 * count2;
  const long long cap = 200;
  const long long stride = std::max<long long>(1, (combos + cap - 1) / cap);

  std::vector<FixturePair> out;
  for (long long t = 0; t < combos; t += stride) {
    auto [s1, w1] = word_map(k1, k - 1, t / count2);
    auto [s2, w2] = word_map(k2, k - 1, t % count2);
    (void)s1;
    (void)s2;
    auto f0 = [&](std::size_t i) { return w1 + lam_km1 * k1.shifts[i]; };          // word.i (0)
    auto f1v = [&](std::size_t i) { return w1 + lam_km1 * (k1.shifts[i] + lam); };  // word.i (1)
    auto g0 = [&](std::size_t j) { return w2 + lam_km1 * k2.shifts[j]; };
    auto g1v = [&](std::size_t j) { return w2 + lam_km1 * (k2.shifts[j] + lam); };

    switch (sc) {
      case SignCase::PP:
        for (std::size_t i = 0; i < k1.size(); ++i)
          for (std::size_t j = 0; j + 1 < k2.size(); ++j) {
            Scalar l18 = lam_km1 * (k2.shifts[j] + lam - k2.shifts[j + 1]);
            out.push_back(make_pair(f1v(i), g1v(j), f1v(i) - lam_k, g0(j + 1), lam_k, l18, sc, k));
          }
        for (std::size_t i = 0; i + 1 < k1.size(); ++i) {
          Scalar l19 = lam_km1 * (k1.shifts[i] + lam - k1.shifts[i + 1]);
          out.push_back(make_pair(f1v(i), w2 + lam_km1, f0(i + 1), w2, l19, lam_km1, sc, k));
        }
        break;
      case SignCase::NN:
        for (std::size_t i = 0; i < k1.size(); ++i)
          for (std::size_t j = 0; j + 1 < k2.size(); ++j) {
            Scalar l22 = lam_km1 * (k2.shifts[j + 1] - k2.shifts[j] - lam);
            out.push_back(
                make_pair(f0(i), g0(j + 1), f0(i) + lam_k, g1v(j), scalar_neg(lam_k), l22, sc, k));
          }
        for (std::size_t i = 0; i + 1 < k1.size(); ++i) {
          Scalar l23 = lam_km1 * (k1.shifts[i + 1] - k1.shifts[i] - lam);
          out.push_back(
              make_pair(f0(i + 1), w2, f1v(i), w2 + lam_km1, l23, scalar_neg(lam_km1), sc, k));
        }
        break;
      case SignCase::NP:
        for (std::size_t i = 0; i < k1.size(); ++i)
          for (std::size_t j = 0; j + 1 < k2.size(); ++j) {
            Scalar l26 = lam_km1 * (k2.shifts[j] + lam - k2.shifts[j + 1]);
            out.push_back(
                make_pair(f0(i), g1v(j), f0(i) + lam_k, g0(j + 1), scalar_neg(lam_k), l26, sc, k));
          }
        for (std::size_t i = 0; i + 1 < k1.size(); ++i) {
          Scalar l27 = lam_km1 * (k1.shifts[i + 1] - k1.shifts[i] - lam);
          out.push_back(make_pair(f0(i + 1), w2 + lam_km1, f1v(i), w2, l27, lam_km1, sc, k));
        }
        break;
      case SignCase::PN:
        for (std::size_t i = 0; i < k1.size(); ++i)
          for (std::size_t j = 0; j + 1 < k2.size(); ++j) {
            Scalar l30 = lam_km1 * (k2.shifts[j + 1] - k2.shifts[j] - lam);
            out.push_back(
                make_pair(f1v(i), g0(j + 1), f1v(i) - lam_k, g1v(j), lam_k, l30, sc, k));
          }
        for (std::size_t i = 0; i + 1 < k1.size(); ++i) {
          Scalar l31 = lam_km1 * (k1.shifts[i] + lam - k1.shifts[i + 1]);
          out.push_back(
              make_pair(f1v(i), w2, f0(i + 1), w2 + lam_km1, l31, scalar_neg(lam_km1), sc, k));
        }
        break;
    }
  }
  return out;
}

bool displacement_exact(const FixturePair& p) {
  Scalar dx = p.hi.x - p.lo.x;
  Scalar dy = p.hi.y - p.lo.y;
  if (dx.has_exact() && dy.has_exact() && p.l1.has_exact() && p.l2.has_exact())
    return rat_cmp(*dx.exact, *p.l1.exact) == 0 && rat_cmp(*dy.exact, *p.l2.exact) == 0;
  auto close = [](double a, double b2) {
    double scale = std::max({1.0, std::fabs(a), std::fabs(b2)});
    return std::fabs(a - b2) <= 4.0 * std::numeric_limits<double>::epsilon() * scale;
  };
  return close(dx.v, p.l1.v) && close(dy.v, p.l2.v);
}

}  // namespace fractim
