#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fractim/interval.hpp"
#include "fractim/rational.hpp"

namespace fractim {

// Eventually periodic sequence: pre[0..] then period repeated forever.
template <typename T>
struct PeriodicSeq {
  std::vector<T> pre;
  std::vector<T> period;

  const T& at(int k) const {  // 1-based
    if (k <= static_cast<int>(pre.size())) return pre[k - 1];
    return period[(k - 1 - pre.size()) % period.size()];
  }
  int settle() const { return static_cast<int>(pre.size()); }
  int cycle() const { return static_cast<int>(period.size()); }
};

// Nested-interval class: at level k each interval splits into `branching_at(k)`
// children of relative length `contraction_at(k)`, endpoints pinned to the
// parent, adjacent children overlapping by at most `overlap` of their length.
struct MoranClass {
  PeriodicSeq<Scalar> contraction;  // c_k in (0, 1/2), c_k * n_k < 1
  PeriodicSeq<int> branching;       // n_k >= 2
  Scalar overlap;                   // in [0, 1)

  MoranClass(PeriodicSeq<Scalar> c, PeriodicSeq<int> n, Scalar overlap_limit);

  const Scalar& contraction_at(int k) const { return contraction.at(k); }
  int branching_at(int k) const { return branching.at(k); }
  // Number of levels after which the (c, n) pair sequence repeats.
  int levels_to_enumerate() const;

  bool operator==(const MoranClass& other) const;
};

// c_k * (2 + (n_k - 2)(1 - overlap)): the span, in parent units, of one child
// plus a maximally packed block of the remaining n_k - 1 children. Always < 1.
Scalar packed_span_ratio(const MoranClass& cls, int k);

struct LevelParams {
  Scalar c;
  int n = 0;
  Scalar span;  // packed_span_ratio at this level
};

struct LevelSummary {
  std::vector<LevelParams> levels;  // distinct (c, n) pairs over all k >= 1
  Scalar ratio_lo;                  // sup_k (1 - span_k)
  Scalar ratio_hi;                  // inf_k c_k / (1 - span_k)
  // c_k + span_k >= 1 at every level (provably): unit-slope images of
  // adjacent child blocks meet end to end.
  bool unit_slope_covers = false;
};

LevelSummary distinct_levels(const MoranClass& cls);

// Conservative double bounds for the certifier: guaranteed to enclose the
// true ratio window from outside-in.
double ratio_lo_upper(const MoranClass& cls);  // >= sup_k (1 - span_k)
double ratio_hi_lower(const MoranClass& cls);  // <= inf_k c_k / (1 - span_k)

enum class Placement { Uniform, PackedLeft, Random };
Placement placement_from_string(const std::string& name);
const char* to_string(Placement p);

// One concrete choice of child positions per level and parent. Offsets are
// child left endpoints in units of the parent length; first pinned to 0,
// last to 1 - c_k, consecutive spacing >= c_k (1 - overlap).
struct MoranRealization {
  MoranClass cls;
  int depth = 0;
  std::vector<std::vector<std::vector<double>>> offsets;  // [level-1][parent][child]
};

MoranRealization realize(const MoranClass& cls, int depth, Placement strategy,
                         std::uint64_t seed = 0);

// The n_1...n_k level-k intervals in parent-major order, unmerged; k = 0
// yields {[0,1]}.
std::vector<Interval> level_intervals(const MoranRealization& r, int k);

// Attractor of { x -> ratio*x + shift_i } with one shared ratio; hull [0,1].
struct HomogeneousIFS {
  Scalar ratio;                // in (0, 1)
  std::vector<Scalar> shifts;  // sorted, first 0, last 1 - ratio

  HomogeneousIFS(Scalar ratio, std::vector<Scalar> shifts);
  std::size_t size() const { return shifts.size(); }
};

struct AffineMap {
  Scalar ratio;  // in (0, 1)
  Scalar shift;
};

// General positive-ratio IFS with hull [0,1].
struct GeneralIFS {
  std::vector<AffineMap> maps;
  explicit GeneralIFS(std::vector<AffineMap> maps);
  std::size_t size() const { return maps.size(); }
};

// All length-k compositions applied to [0,1], in word order (first map index
// varying slowest); k = 0 yields {[0,1]}.
std::vector<Interval> cylinders(const HomogeneousIFS& ifs, int k);
std::vector<Interval> cylinders(const GeneralIFS& ifs, int k);

// Signed spacings between consecutive first-level cylinders.
struct GapProfile {
  // (1-based pair index i, left end of map i+1's cylinder minus right end of
  // map i's). Positive means an actual hole.
  std::vector<std::pair<int, Scalar>> adjacent;
  std::vector<int> open_indices;  // pairs with a positive hole
  Scalar max_gap;                 // largest positive hole
};

// Throws InvariantError when no positive gap exists (attractor is [0,1]).
GapProfile gap_profile(const HomogeneousIFS& ifs);

// Checks that composing K's maps along each word reproduces `sub`'s maps
// exactly: word t must yield ratio sub.ratio and shift sub.shifts[t].
// Exact rational comparison when the parameters carry rationals, 1e-12
// otherwise. Throws on malformed words.
bool verify_sub_ifs(const GeneralIFS& K, const HomogeneousIFS& sub,
                    const std::vector<std::string>& words);

}  // namespace fractim
