#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fractim/certifier.hpp"

namespace fractim {

// Exact image of f over a box for a sign-definite f: the extrema sit at the
// two corners selected by the sign case.
Interval box_image(const PartialBundle& b, SignCase sc, const Box& box);

// Fallback for sign-indefinite f: min/max over the four corners. Exact only
// for f monotone in each variable separately on the box; demo-path only.
Interval box_image_corners(const PartialBundle& b, const Box& box);

// Union of box images over all |C|*|D| pairs, normalized. Uses a streaming
// k-way merge when the sign case is known; the lists are used unmerged so
// structural overlaps stay intact.
IntervalSet level_image(const PartialBundle& b, std::optional<SignCase> sc,
                        const std::vector<Interval>& C, const std::vector<Interval>& D,
                        double merge_tol);

Interval hull_image(const PartialBundle& b, SignCase sc);

struct LevelImageRow {
  int k = 0;
  IntervalSet image;
  std::size_t components = 0;
  double hausdorff_prev = 0.0;   // distance to the level-(k-1) image
  bool nested_in_prev = true;    // image_k within tol of image_{k-1}
  bool stabilized_next = true;   // set_equal(image_k, image_{k+1}, tol); last row vacuous
};

struct LevelImageReport {
  std::vector<LevelImageRow> rows;
  bool all_stabilized = true;
  bool all_nested = true;
};

using LevelFn = std::function<std::vector<Interval>(int)>;

LevelImageReport stabilization_report(const PartialBundle& b, std::optional<SignCase> sc,
                                      const LevelFn& C, const LevelFn& D, int k_max, double tol,
                                      double merge_tol = 1e-9);

struct FixturePoint {
  Scalar x, y;
};

// A packed extreme configuration: the claimed inequality is f(hi) >= f(lo),
// and hi - lo must equal (l1, l2) componentwise.
struct FixturePair {
  FixturePoint hi, lo;
  Scalar l1, l2;
  SignCase sc = SignCase::PP;
  int k = 1;
};

// Extreme child placements of a level-k parent (outermost parent, so the
// anchor is the origin): the first branching-1 children packed to the left
// with the maximal allowed overlap, the last child pinned right. Per sign
// case, two families; the first is parameterized by a corner abscissa x0
// sampled uniformly over its legal range.
std::vector<FixturePair> extreme_pairs(const MoranClass& cls, int k, SignCase sc,
                                       int x0_samples = 9);

// Same construction for a pair of homogeneous IFS attractors: one fixture
// family per adjacent cylinder pair, anchored at every sampled length-(k-1)
// word pair (capped at 200 word pairs, deterministically strided).
std::vector<FixturePair> ifs_extreme_pairs(const HomogeneousIFS& k1, const HomogeneousIFS& k2,
                                           int k, SignCase sc);

// hi - lo == (l1, l2): exact rational check when the coordinates carry
// rationals, 4-ulp double check otherwise.
bool displacement_exact(const FixturePair& p);

}  // namespace fractim
