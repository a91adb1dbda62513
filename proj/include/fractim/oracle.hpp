#pragma once

#include <vector>

#include "fractim/expr.hpp"
#include "fractim/fractal.hpp"
#include "fractim/interval.hpp"

namespace fractim {

// Deduplicated, sorted points guaranteed to lie in the limit set: cylinder
// endpoints for IFS sources (images of {0,1} under all depth-length words),
// basic-interval endpoints for realizations (they persist to every deeper
// level by endpoint pinning). Throws CapacityError above 10^7 points.
std::vector<double> sample_points(const MoranRealization& r, int depth);
std::vector<double> sample_points(const HomogeneousIFS& ifs, int depth);
std::vector<double> sample_points(const GeneralIFS& ifs, int depth);

// f over the Cartesian product of the samples, sorted and run-merged with
// merge_tol. An under-approximation of the true image (every sample is a
// genuine member) and a density probe of it. Caps at 10^7 pairs.
IntervalSet brute_force_image(const PartialBundle& b, const std::vector<double>& xs,
                              const std::vector<double>& ys, double merge_tol);

struct OracleComparison {
  bool contained = false;  // oracle within tol of the exact set
  double hausdorff = 0.0;
};

// The oracle's points are ground truth members, so containment failing is a
// hard error in the exact computation, not in the oracle.
OracleComparison compare_images(const IntervalSet& oracle, const IntervalSet& exact, double tol);

// Largest spacing between consecutive values of f over the sample product,
// restricted to [window.lo, window.hi]; also reports the extreme values seen
// inside the window. Used by coverage checks.
struct CoverageScan {
  double max_gap = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  std::size_t count = 0;
};
CoverageScan coverage_scan(const PartialBundle& b, const std::vector<double>& xs,
                           const std::vector<double>& ys, const Interval& window);

}  // namespace fractim
