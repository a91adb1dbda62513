#include "fractim/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fractim {

const char* to_string(SignCase c) {
  switch (c) {
    case SignCase::PP: return "PP";
    case SignCase::NN: return "NN";
    case SignCase::NP: return "NP";
    case SignCase::PN: return "PN";
  }
  return "?";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Certified: return "certified";
    case Status::ConditionsViolated: return "conditions-violated";
    case Status::Unknown: return "unknown";
  }
  return "?";
}

void SearchStats::absorb(const SearchStats& o) {
  boxes += o.boxes;
  max_depth = std::max(max_depth, o.max_depth);
}

DomainSpec DomainSpec::unit_square() {
  DomainSpec d;
  d.boxes.push_back(Box{Interval(0.0, 1.0), Interval(0.0, 1.0)});
  return d;
}

DomainSpec DomainSpec::level_boxes(const std::vector<Interval>& C, const std::vector<Interval>& D) {
  if (C.empty() || D.empty()) throw InvariantError("level boxes need nonempty interval lists");
  DomainSpec d;
  d.boxes.reserve(C.size() * D.size());
  for (const Interval& cx : C)
    for (const Interval& dy : D) d.boxes.push_back(Box{cx, dy});
  return d;
}

bool DomainSpec::is_unit_square() const {
  return boxes.size() == 1 && boxes[0].x == Interval(0.0, 1.0) && boxes[0].y == Interval(0.0, 1.0);
}

namespace {

struct WorkItem {
  Box box;
  int depth;
};

// Pushes the two halves so the lower one is explored first; witnesses are
// then found in lexicographic box order, deterministically.
bool push_split(std::vector<WorkItem>& stack, const WorkItem& item) {
  const Box& b = item.box;
  bool split_x = b.x.width() >= b.y.width();
  if (split_x && b.x.is_point()) split_x = false;
  if (!split_x && b.y.is_point()) {
    if (!b.x.is_point()) split_x = true;
    else return false;
  }
  if (split_x) {
    double m = b.x.mid();
    if (m <= b.x.lo || m >= b.x.hi) return false;
    stack.push_back({Box{Interval(m, b.x.hi), b.y}, item.depth + 1});
    stack.push_back({Box{Interval(b.x.lo, m), b.y}, item.depth + 1});
  } else {
    double m = b.y.mid();
    if (m <= b.y.lo || m >= b.y.hi) return false;
    stack.push_back({Box{b.x, Interval(m, b.y.hi)}, item.depth + 1});
    stack.push_back({Box{b.x, Interval(b.y.lo, m)}, item.depth + 1});
  }
  return true;
}

// Certifies enclosure(box).lo >= 0 over the whole domain.
template <typename EvalFn>
ConditionReport run_nonneg(const std::string& id, EvalFn&& enclosure, const DomainSpec& dom,
                           const SearchBudget& budget) {
  ConditionReport rep;
  rep.id = id;
  bool exhausted = false;
  std::vector<WorkItem> stack;
  for (auto it = dom.boxes.rbegin(); it != dom.boxes.rend(); ++it) stack.push_back({*it, 0});
  while (!stack.empty()) {
    WorkItem item = stack.back();
    stack.pop_back();
    ++rep.stats.boxes;
    rep.stats.max_depth = std::max(rep.stats.max_depth, item.depth);
    Interval enc;
    try {
      enc = enclosure(item.box);
    } catch (const DomainError& err) {
      rep.status = Status::ConditionsViolated;
      rep.witness = Witness{id + ": " + err.what(), item.box, Interval(0.0, 0.0)};
      return rep;
    }
    if (enc.lo >= 0.0) continue;
    if (enc.hi < 0.0) {
      rep.status = Status::ConditionsViolated;
      rep.witness = Witness{id, item.box, enc};
      return rep;
    }
    if (item.depth >= budget.max_depth || rep.stats.boxes >= budget.max_boxes ||
        !push_split(stack, item)) {
      exhausted = true;
    }
  }
  rep.status = exhausted ? Status::Unknown : Status::Certified;
  return rep;
}

enum class SignOutcome { Positive, Negative, Violated, Unknown };

struct SignScan {
  SignOutcome outcome = SignOutcome::Unknown;
  std::optional<Witness> witness;
  SearchStats stats;
};

// Strict sign-definiteness of one expression over the domain. A rigorous
// zero (exact [0,0] enclosure at a point or sub-box) or a provable sign
// change violates; enclosures merely touching zero only split.
SignScan classify_expr_sign(const Expr& g, const std::string& id, const DomainSpec& dom,
                            const SearchBudget& budget) {
  SignScan scan;
  bool saw_pos = false, saw_neg = false, exhausted = false;

  auto note_box = [&](const Interval& enc, const Box& at) -> bool {
    // returns true when the scan is decided
    if (enc.lo == 0.0 && enc.hi == 0.0) {
      scan.outcome = SignOutcome::Violated;
      scan.witness = Witness{id + ": partial derivative vanishes", at, enc};
      return true;
    }
    if (enc.lo > 0.0) saw_pos = true;
    if (enc.hi < 0.0) saw_neg = true;
    if (saw_pos && saw_neg) {
      scan.outcome = SignOutcome::Violated;
      scan.witness = Witness{id + ": partial derivative changes sign", at, enc};
      return true;
    }
    return false;
  };

  // Rigorous point probes: corners, edge midpoints, center of every box.
  for (const Box& b : dom.boxes) {
    const double xs[3] = {b.x.lo, b.x.mid(), b.x.hi};
    const double ys[3] = {b.y.lo, b.y.mid(), b.y.hi};
    for (double px : xs)
      for (double py : ys) {
        Box at{Interval::point(px), Interval::point(py)};
        Interval enc;
        try {
          enc = g.eval(at.x, at.y);
        } catch (const DomainError& err) {
          scan.outcome = SignOutcome::Violated;
          scan.witness = Witness{id + ": " + err.what(), at, Interval(0.0, 0.0)};
          return scan;
        }
        if (note_box(enc, at)) return scan;
      }
  }

  std::vector<WorkItem> stack;
  for (auto it = dom.boxes.rbegin(); it != dom.boxes.rend(); ++it) stack.push_back({*it, 0});
  while (!stack.empty()) {
    WorkItem item = stack.back();
    stack.pop_back();
    ++scan.stats.boxes;
    scan.stats.max_depth = std::max(scan.stats.max_depth, item.depth);
    Interval enc;
    try {
      enc = g.eval(item.box.x, item.box.y);
    } catch (const DomainError& err) {
      scan.outcome = SignOutcome::Violated;
      scan.witness = Witness{id + ": " + err.what(), item.box, Interval(0.0, 0.0)};
      return scan;
    }
    if (note_box(enc, item.box)) return scan;
    if (enc.lo > 0.0 || enc.hi < 0.0) continue;  // sign-definite leaf
    if (item.depth >= budget.max_depth || scan.stats.boxes >= budget.max_boxes ||
        !push_split(stack, item)) {
      exhausted = true;
    }
  }
  if (exhausted) {
    scan.outcome = SignOutcome::Unknown;
  } else {
    scan.outcome = saw_neg ? SignOutcome::Negative : SignOutcome::Positive;
  }
  return scan;
}

ConditionReport report_of(const std::string& id, const SignScan& scan) {
  ConditionReport rep;
  rep.id = id;
  rep.stats = scan.stats;
  switch (scan.outcome) {
    case SignOutcome::Positive:
    case SignOutcome::Negative:
      rep.status = Status::Certified;
      break;
    case SignOutcome::Violated:
      rep.status = Status::ConditionsViolated;
      rep.witness = scan.witness;
      break;
    case SignOutcome::Unknown:
      rep.status = Status::Unknown;
      break;
  }
  return rep;
}

Verdict combine(std::vector<ConditionReport> reports) {
  Verdict v;
  v.status = Status::Certified;
  for (ConditionReport& c : reports) {
    v.stats.absorb(c.stats);
    if (c.status == Status::ConditionsViolated) {
      if (v.status != Status::ConditionsViolated) {
        v.status = Status::ConditionsViolated;
        v.witness = c.witness;
      }
    } else if (c.status == Status::Unknown && v.status == Status::Certified) {
      v.status = Status::Unknown;
    }
  }
  v.conditions = std::move(reports);
  return v;
}

double upper_pad(const Scalar& s, int ulps) {
  return s.has_exact() ? s.exact->to_double_up() : pad_up(s.v, ulps);
}

double lower_pad(const Scalar& s, int ulps) {
  return s.has_exact() ? s.exact->to_double_down() : pad_down(s.v, ulps);
}

std::string interval_text(double lo, double hi) {
  return "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
}

}  // namespace

SignClassification classify_signs(const PartialBundle& b, const DomainSpec& dom,
                                  const SearchBudget& budget) {
  SignClassification out;
  SignScan sx = classify_expr_sign(b.fx, "dx-sign", dom, budget);
  SignScan sy = classify_expr_sign(b.fy, "dy-sign", dom, budget);
  std::vector<ConditionReport> reps;
  reps.push_back(report_of("dx-sign", sx));
  reps.push_back(report_of("dy-sign", sy));
  out.detail = combine(std::move(reps));
  if (out.detail.status == Status::Certified) {
    bool xp = sx.outcome == SignOutcome::Positive;
    bool yp = sy.outcome == SignOutcome::Positive;
    out.sign = xp ? (yp ? SignCase::PP : SignCase::PN) : (yp ? SignCase::NP : SignCase::NN);
    out.detail.sign_case = out.sign;
  }
  return out;
}

Verdict certify_quadform_nonneg(double l1, double l2, const PartialBundle& b,
                                const DomainSpec& dom, const SearchBudget& budget,
                                const std::string& id) {
  const double c_xx = l1 * l1;
  const double c_xy = 2.0 * l1 * l2;
  const double c_yy = l2 * l2;
  auto enclosure = [&](const Box& bx) {
    Interval q = enclose::scale(c_xx, b.fxx.eval(bx.x, bx.y));
    q = enclose::add(q, enclose::scale(c_xy, b.fxy.eval(bx.x, bx.y)));
    q = enclose::add(q, enclose::scale(c_yy, b.fyy.eval(bx.x, bx.y)));
    return q;
  };
  return combine({run_nonneg(id, enclosure, dom, budget)});
}

Verdict certify_ratio_bounds(double lo, double hi, SignCase sc, const PartialBundle& b,
                             const DomainSpec& dom, const SearchBudget& budget) {
  if (lo > hi) {
    // Empty window: both sides cannot hold anywhere; report against the
    // first domain box without searching.
    Verdict v;
    ConditionReport rep;
    rep.id = "ratio-window";
    rep.status = Status::ConditionsViolated;
    rep.witness = Witness{"ratio-window empty: lower bound exceeds upper bound", dom.boxes.front(),
                          Interval::hull(lo, hi)};
    v.conditions.push_back(rep);
    v.status = Status::ConditionsViolated;
    v.witness = rep.witness;
    return v;
  }
  const double s = fx_sign(sc);
  const double d = delta_of(sc);
  auto lower_encl = [&](const Box& bx) {
    Interval ex = b.fx.eval(bx.x, bx.y);
    Interval ey = b.fy.eval(bx.x, bx.y);
    return enclose::scale(s, enclose::sub(enclose::scale(d, ey), enclose::scale(lo, ex)));
  };
  auto upper_encl = [&](const Box& bx) {
    Interval ex = b.fx.eval(bx.x, bx.y);
    Interval ey = b.fy.eval(bx.x, bx.y);
    return enclose::scale(s, enclose::sub(enclose::scale(hi, ex), enclose::scale(d, ey)));
  };
  std::vector<ConditionReport> reps;
  reps.push_back(run_nonneg("ratio-lower", lower_encl, dom, budget));
  reps.push_back(run_nonneg("ratio-upper", upper_encl, dom, budget));
  Verdict v = combine(std::move(reps));
  v.sign_case = sc;
  return v;
}

Verdict certify_moran(const PartialBundle& b, const MoranClass& cls, const DomainSpec& dom,
                      const SearchBudget& budget) {
  SignClassification cl = classify_signs(b, dom, budget);
  if (!cl.sign) return cl.detail;
  const SignCase sc = *cl.sign;
  const double d = delta_of(sc);

  std::vector<ConditionReport> reps = cl.detail.conditions;
  LevelSummary summary = distinct_levels(cls);
  for (std::size_t i = 0; i < summary.levels.size(); ++i) {
    const LevelParams& lp = summary.levels[i];
    const double coeff = d * (lp.span.v - 1.0);
    Verdict q1 = certify_quadform_nonneg(lp.c.v, coeff, b, dom, budget,
                                         "form-x[" + std::to_string(i) + "]");
    Verdict q2 = certify_quadform_nonneg(coeff, 1.0, b, dom, budget,
                                         "form-y[" + std::to_string(i) + "]");
    reps.push_back(q1.conditions.front());
    reps.push_back(q2.conditions.front());
  }
  Verdict rb = certify_ratio_bounds(ratio_lo_upper(cls), ratio_hi_lower(cls), sc, b, dom, budget);
  for (ConditionReport& c : rb.conditions) reps.push_back(std::move(c));

  Verdict v = combine(std::move(reps));
  v.sign_case = sc;
  if (v.certified()) {
    v.conclusion = dom.is_unit_square()
                       ? "image is a closed interval"
                       : "image is a union of at most " + std::to_string(dom.boxes.size()) +
                             " closed intervals";
  }
  return v;
}

Verdict certify_linear(const MoranClass& cls, const Scalar& slope) {
  bool zero = slope.has_exact() ? slope.exact->is_zero() : slope.v == 0.0;
  if (zero) throw InvariantError("slope must be nonzero");
  const Scalar mag = scalar_abs(slope);
  LevelSummary summary = distinct_levels(cls);
  const Scalar one = Scalar::rational(1, 1);

  std::vector<ConditionReport> reps;
  auto scalar_condition = [&](const std::string& id, const Scalar& lhs, const Scalar& rhs) {
    // certifies lhs <= rhs
    ConditionReport rep;
    rep.id = id;
    if (lhs.has_exact() && rhs.has_exact()) {
      rep.status = rat_cmp(*lhs.exact, *rhs.exact) <= 0 ? Status::Certified
                                                        : Status::ConditionsViolated;
    } else if (pad_up(lhs.v, 4) <= pad_down(rhs.v, 4)) {
      rep.status = Status::Certified;
    } else if (pad_down(lhs.v, 4) > pad_up(rhs.v, 4)) {
      rep.status = Status::ConditionsViolated;
    } else {
      rep.status = Status::Unknown;
    }
    if (rep.status == Status::ConditionsViolated) {
      rep.witness = Witness{id + ": " + std::to_string(lhs.v) + " > " + std::to_string(rhs.v),
                            Box{Interval(0.0, 1.0), Interval(0.0, 1.0)},
                            Interval::point(slope.v)};
    }
    return rep;
  };

  for (std::size_t i = 0; i < summary.levels.size(); ++i) {
    const LevelParams& lp = summary.levels[i];
    reps.push_back(scalar_condition("slope-lower[" + std::to_string(i) + "]", one - lp.span, mag));
    reps.push_back(
        scalar_condition("slope-upper[" + std::to_string(i) + "]", mag, lp.c / (one - lp.span)));
  }
  Verdict v = combine(std::move(reps));
  v.sign_case = slope.v > 0.0 ? SignCase::PP : SignCase::PN;
  if (v.certified()) {
    double s = slope.v;
    double lo = s > 0.0 ? 0.0 : s;
    double hi = s > 0.0 ? 1.0 + s : 1.0;
    v.conclusion = "image is the closed interval " + interval_text(lo, hi);
    bool unit = mag.has_exact() ? rat_cmp(*mag.exact, Rat{1, 1}) == 0 : mag.v == 1.0;
    if (unit && summary.unit_slope_covers) {
      v.conclusion += s > 0.0 ? "; sums cover [0, 2] exactly" : "; differences cover [-1, 1] exactly";
    }
  }
  return v;
}

Verdict certify_ifs(const PartialBundle& b, const HomogeneousIFS& k1, const HomogeneousIFS& k2,
                    const DomainSpec& dom, const SearchBudget& budget) {
  if (!scalar_eq(k1.ratio, k2.ratio))
    throw InvariantError("the two IFS must share one contraction ratio");
  GapProfile prof1 = gap_profile(k1);
  GapProfile prof2 = gap_profile(k2);

  SignClassification cl = classify_signs(b, dom, budget);
  if (!cl.sign) return cl.detail;
  const SignCase sc = *cl.sign;
  const double d = delta_of(sc);
  const double lambda = k1.ratio.v;

  std::vector<ConditionReport> reps = cl.detail.conditions;
  for (std::size_t l = 0; l + 1 < k2.size(); ++l) {
    // g_l(1) - g_{l+1}(0): negative of the signed hole between cylinders.
    const double overhang = -prof2.adjacent[l].second.v;
    Verdict q = certify_quadform_nonneg(lambda * d, overhang, b, dom, budget,
                                        "form-y[" + std::to_string(l + 1) + "]");
    reps.push_back(q.conditions.front());
  }
  for (std::size_t j = 0; j + 1 < k1.size(); ++j) {
    const double overhang = -prof1.adjacent[j].second.v;
    Verdict q = certify_quadform_nonneg(d * overhang, 1.0, b, dom, budget,
                                        "form-x[" + std::to_string(j + 1) + "]");
    reps.push_back(q.conditions.front());
  }
  const double lo = upper_pad(prof1.max_gap, 4);
  const double hi = lower_pad(k1.ratio / prof2.max_gap, 6);
  Verdict rb = certify_ratio_bounds(lo, hi, sc, b, dom, budget);
  for (ConditionReport& c : rb.conditions) reps.push_back(std::move(c));

  Verdict v = combine(std::move(reps));
  v.sign_case = sc;
  if (v.certified()) {
    v.conclusion = dom.is_unit_square()
                       ? "image is a closed interval"
                       : "image is a union of at most " + std::to_string(dom.boxes.size()) +
                             " closed intervals";
  }
  return v;
}

namespace {

Interval hull_corner_image(const PartialBundle& b, SignCase sc) {
  switch (sc) {
    case SignCase::PP: return Interval(b.f.eval(0.0, 0.0), b.f.eval(1.0, 1.0));
    case SignCase::NN: return Interval(b.f.eval(1.0, 1.0), b.f.eval(0.0, 0.0));
    case SignCase::NP: return Interval(b.f.eval(1.0, 0.0), b.f.eval(0.0, 1.0));
    case SignCase::PN: return Interval(b.f.eval(0.0, 1.0), b.f.eval(1.0, 0.0));
  }
  throw Error("bad sign case");
}

}  // namespace

SandwichResult certify_sandwich(const PartialBundle& b, const GeneralIFS& K,
                                const HomogeneousIFS& sub, const std::vector<std::string>& words,
                                const SearchBudget& budget) {
  if (!verify_sub_ifs(K, sub, words)) throw InvariantError("sub-IFS witness invalid");
  SandwichResult out;
  out.verdict = certify_ifs(b, sub, sub, DomainSpec::unit_square(), budget);
  if (out.verdict.certified()) {
    Interval h = hull_corner_image(b, *out.verdict.sign_case);
    out.image = h;
    out.verdict.conclusion = "image equals the hull image " + interval_text(h.lo, h.hi);
  }
  return out;
}

CantorConstants cantor_constants() {
  // Middle-third pair: ratio 1/3, shifts {0, 2/3}, single hole of size 1/3.
  const Rat third{1, 3};
  const Rat one{1, 1};
  CantorConstants out;
  out.ratio_lo = third;                 // largest hole of the first IFS
  out.ratio_hi = *rat_div(third, third);  // ratio / largest hole of the second

  auto norm3 = [](Rat a, Rat b, Rat c) {
    std::array<Rat, 3> t{*rat_div(a, a), *rat_div(b, a), *rat_div(c, a)};
    return t;
  };
  // x-side pair: (l1, l2) = (delta*(f_1(1) - f_2(0)), 1) = (-1/3, 1)
  Rat l1 = rat_neg(third), l2 = one;
  out.x_side_form = norm3(*rat_mul(l1, l1), *rat_mul(Rat{2, 1}, *rat_mul(l1, l2)),
                          *rat_mul(l2, l2));
  // y-side pair: (l1, l2) = (lambda*delta, g_1(1) - g_2(0)) = (1/3, -1/3)
  l1 = third;
  l2 = rat_neg(third);
  out.y_side_form = norm3(*rat_mul(l1, l1), *rat_mul(Rat{2, 1}, *rat_mul(l1, l2)),
                          *rat_mul(l2, l2));
  return out;
}

Verdict certify_second_order_signs(const PartialBundle& b, const DomainSpec& dom,
                                   const SearchBudget& budget) {
  auto xx = [&](const Box& bx) { return b.fxx.eval(bx.x, bx.y); };
  auto xy = [&](const Box& bx) { return enclose::neg(b.fxy.eval(bx.x, bx.y)); };
  auto yy = [&](const Box& bx) { return b.fyy.eval(bx.x, bx.y); };
  std::vector<ConditionReport> reps;
  reps.push_back(run_nonneg("fxx-nonneg", xx, dom, budget));
  reps.push_back(run_nonneg("fxy-nonpos", xy, dom, budget));
  reps.push_back(run_nonneg("fyy-nonneg", yy, dom, budget));
  return combine(std::move(reps));
}

}  // namespace fractim
