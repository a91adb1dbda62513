#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fractim/expr.hpp"
#include "fractim/fractal.hpp"

namespace fractim {

// Joint sign pattern of (fx, fy) on the domain; P = strictly positive,
// N = strictly negative.
enum class SignCase { PP, NN, NP, PN };

inline int delta_of(SignCase c) { return (c == SignCase::PP || c == SignCase::NN) ? 1 : -1; }
inline int fx_sign(SignCase c) { return (c == SignCase::PP || c == SignCase::PN) ? 1 : -1; }
inline int fy_sign(SignCase c) { return (c == SignCase::PP || c == SignCase::NP) ? 1 : -1; }
const char* to_string(SignCase c);

struct Box {
  Interval x, y;
};

enum class Status { Certified, ConditionsViolated, Unknown };
const char* to_string(Status s);

struct Witness {
  std::string condition;
  Box box;
  Interval enclosure;
};

struct SearchStats {
  long boxes = 0;
  int max_depth = 0;
  void absorb(const SearchStats& o);
};

struct ConditionReport {
  std::string id;
  Status status = Status::Unknown;
  std::optional<Witness> witness;
  SearchStats stats;
};

// Three-way certification outcome. Certified means every required inequality
// was verified with rigorous enclosures on a finite box cover. A violation
// carries a box on which some condition provably fails; the theorems are
// sufficient only, so nothing is claimed about the image in that case.
struct Verdict {
  Status status = Status::Unknown;
  std::optional<Witness> witness;
  SearchStats stats;
  std::vector<ConditionReport> conditions;
  std::optional<SignCase> sign_case;
  std::string conclusion;

  bool certified() const { return status == Status::Certified; }
};

// Region the inequalities are required on: the unit square, or the box pairs
// of a level restriction.
struct DomainSpec {
  std::vector<Box> boxes;

  static DomainSpec unit_square();
  static DomainSpec level_boxes(const std::vector<Interval>& C, const std::vector<Interval>& D);
  bool is_unit_square() const;
};

struct SearchBudget {
  long max_boxes = 200000;  // leaf boxes per condition
  int max_depth = 40;
};

struct SignClassification {
  std::optional<SignCase> sign;  // present iff detail.status == Certified
  Verdict detail;
};

// Subdivides until fx and fy are sign-definite on every leaf. A partial that
// provably vanishes (exact-zero enclosure, boundary included) or provably
// changes sign yields ConditionsViolated; budget exhaustion yields Unknown.
SignClassification classify_signs(const PartialBundle& b, const DomainSpec& dom,
                                  const SearchBudget& budget = {});

// Certifies l1^2 fxx + 2 l1 l2 fxy + l2^2 fyy >= 0 on the domain. The
// inequality is closed: identically-zero forms certify immediately.
Verdict certify_quadform_nonneg(double l1, double l2, const PartialBundle& b,
                                const DomainSpec& dom, const SearchBudget& budget = {},
                                const std::string& id = "quadform");

// Certifies lo <= delta * fy / fx <= hi pointwise via sign-corrected
// products (never interval division): with s = sign of fx,
//   s * (delta*fy - lo*fx) >= 0   and   s * (hi*fx - delta*fy) >= 0.
Verdict certify_ratio_bounds(double lo, double hi, SignCase sc, const PartialBundle& b,
                             const DomainSpec& dom, const SearchBudget& budget = {});

// Full condition set for a Moran class: sign classification, both quadratic
// forms per distinct level, and the ratio window [sup(1-span), inf c/(1-span)].
Verdict certify_moran(const PartialBundle& b, const MoranClass& cls, const DomainSpec& dom,
                      const SearchBudget& budget = {});

// Closed-form scalar check for f = x + s*y: sup_k(1-span_k) <= |s| <=
// inf_k c_k/(1-span_k). For |s| = 1 the certified conclusion covers the full
// hull ([0,2] for the sum, [-1,1] for the difference) when c_k+span_k >= 1.
Verdict certify_linear(const MoranClass& cls, const Scalar& slope);

// Full condition set for a pair of homogeneous IFS attractors sharing one
// ratio: per adjacent pair of either IFS a quadratic form built from the
// signed gap, plus the ratio window [tau1, ratio/tau2].
Verdict certify_ifs(const PartialBundle& b, const HomogeneousIFS& k1, const HomogeneousIFS& k2,
                    const DomainSpec& dom, const SearchBudget& budget = {});

struct SandwichResult {
  Verdict verdict;
  std::optional<Interval> image;  // f(K,K) when certified
};

// General-IFS certification through an embedded homogeneous sub-IFS: the
// witness words must compose exactly to `sub`'s maps; if the pair (sub, sub)
// certifies on the unit square, f(K,K) equals the hull image.
SandwichResult certify_sandwich(const PartialBundle& b, const GeneralIFS& K,
                                const HomogeneousIFS& sub, const std::vector<std::string>& words,
                                const SearchBudget& budget = {});

// Derived constants for the middle-third Cantor pair under the PP sign case:
// the ratio window is exactly [1/3, 1] and the two quadratic forms reduce to
// integer coefficient triples on (fxx, fxy, fyy).
struct CantorConstants {
  Rat ratio_lo, ratio_hi;
  std::array<Rat, 3> x_side_form;  // from the adjacent pair of the first IFS
  std::array<Rat, 3> y_side_form;  // from the adjacent pair of the second IFS
};
CantorConstants cantor_constants();

// Fast sufficient pre-check: fxx >= 0, fxy <= 0, fyy >= 0 on the domain.
// Certifying it implies both Cantor quadratic forms.
Verdict certify_second_order_signs(const PartialBundle& b, const DomainSpec& dom,
                                   const SearchBudget& budget = {});

}  // namespace fractim
