#include <doctest.h>

#include <cmath>

#include "fractim/certifier.hpp"
#include "fractim/demos.hpp"

using namespace fractim;

namespace {

PartialBundle bundle(const char* text) { return PartialBundle::of(Expr::parse(text)); }

DomainSpec unit() { return DomainSpec::unit_square(); }

}  // namespace

TEST_CASE("sign classification on the unit square") {
  auto pp = classify_signs(bundle("x + 0.5*y"), unit());
  REQUIRE(pp.sign.has_value());
  CHECK(*pp.sign == SignCase::PP);
  CHECK(delta_of(*pp.sign) == 1);

  auto np = classify_signs(bundle("-x + 2*y"), unit());
  REQUIRE(np.sign.has_value());
  CHECK(*np.sign == SignCase::NP);
  CHECK(delta_of(*np.sign) == -1);

  auto pn = classify_signs(bundle("x - y"), unit());
  REQUIRE(pn.sign.has_value());
  CHECK(*pn.sign == SignCase::PN);

  auto nn = classify_signs(bundle("-x - y"), unit());
  REQUIRE(nn.sign.has_value());
  CHECK(*nn.sign == SignCase::NN);

  // fx = y vanishes on the bottom edge; never certified
  auto bad = classify_signs(bundle("x*y"), unit());
  CHECK(!bad.sign.has_value());
  CHECK(bad.detail.status != Status::Certified);
}

TEST_CASE("quadratic form certification") {
  // linear f: all second partials identically zero, the closed form certifies
  Verdict lin = certify_quadform_nonneg(0.7, -0.3, bundle("x + 0.5*y"), unit());
  CHECK(lin.certified());
  CHECK(lin.stats.boxes == 1);

  // quadratic demo instance: fxx - 2 fxy + fyy = 2 - 1 + 2 = 3
  Verdict quad = certify_quadform_nonneg(1.0, -1.0, bundle("x^2+y^2+6*x+3*y+0.5*x*y"), unit());
  CHECK(quad.certified());

  Verdict neg = certify_quadform_nonneg(1.0, 1.0, bundle("-x^2 - y^2"), unit());
  CHECK(neg.status == Status::ConditionsViolated);
  REQUIRE(neg.witness.has_value());
}

TEST_CASE("ratio bound certification") {
  const double third_up = Rat{1, 3}.to_double_up();
  Verdict ok = certify_ratio_bounds(third_up, 1.0, SignCase::PP, bundle("x + 0.5*y"), unit());
  CHECK(ok.certified());

  Verdict too_steep = certify_ratio_bounds(third_up, 1.0, SignCase::PP, bundle("x + 2*y"), unit());
  CHECK(too_steep.status == Status::ConditionsViolated);

  // boundary-tight: ratio identically 1 against the closed upper bound 1
  Verdict tight = certify_ratio_bounds(third_up, 1.0, SignCase::PP, bundle("x + y"), unit());
  CHECK(tight.certified());

  Verdict empty = certify_ratio_bounds(0.9, 0.2, SignCase::PP, bundle("x + y"), unit());
  CHECK(empty.status == Status::ConditionsViolated);
}

TEST_CASE("full class certification") {
  MoranClass cantor = fixtures::cantor_class();
  Verdict half = certify_moran(bundle("x + 0.5*y"), cantor, unit());
  CHECK(half.certified());
  REQUIRE(half.sign_case.has_value());
  CHECK(*half.sign_case == SignCase::PP);
  CHECK(half.conclusion == "image is a closed interval");

  Verdict quad = certify_moran(bundle("x^2+y^2+6*x+3*y+0.5*x*y"), cantor, unit());
  CHECK(quad.certified());

  Verdict prod = certify_moran(bundle("x*y"), cantor, unit());
  CHECK(prod.status != Status::Certified);

  // boundary slope s = 1 through the interval route as well
  Verdict sum = certify_moran(bundle("x + y"), cantor, unit());
  CHECK(sum.certified());

  Verdict diff = certify_moran(bundle("x - y"), cantor, unit());
  CHECK(diff.certified());
  CHECK(*diff.sign_case == SignCase::PN);
}

TEST_CASE("restricted-domain certification") {
  // Defined only away from x = 0.5: certifiable on the level-1 boxes where
  // the singular line is excluded, never on the unit square.
  PartialBundle b = bundle("1/(x-0.5)^2 + 1000*x + 500*y");
  MoranClass cantor = fixtures::cantor_class();
  MoranRealization r = realize(cantor, 1, Placement::Uniform);
  auto level1 = level_intervals(r, 1);
  DomainSpec dom = DomainSpec::level_boxes(level1, level1);
  REQUIRE(dom.boxes.size() == 4);

  Verdict v = certify_moran(b, cantor, dom);
  CHECK(v.certified());
  CHECK(v.conclusion == "image is a union of at most 4 closed intervals");

  Verdict whole = certify_moran(b, cantor, unit());
  CHECK(whole.status == Status::ConditionsViolated);
}

TEST_CASE("linear slope certification") {
  MoranClass cantor = fixtures::cantor_class();
  Verdict unit_slope = certify_linear(cantor, Scalar::rational(1, 1));
  CHECK(unit_slope.certified());
  CHECK(unit_slope.conclusion.find("[0") != std::string::npos);
  CHECK(unit_slope.conclusion.find("cover") != std::string::npos);

  Verdict neg_unit = certify_linear(cantor, Scalar::rational(-1, 1));
  CHECK(neg_unit.certified());

  Verdict steep = certify_linear(cantor, Scalar::rational(2, 1));
  CHECK(steep.status == Status::ConditionsViolated);

  // boundary-inclusive: s = 1/3 certifies exactly
  Verdict third = certify_linear(cantor, Scalar::rational(1, 3));
  CHECK(third.certified());

  // ... but the nearest double to 1/3 lies strictly below and is refused
  Verdict below = certify_linear(cantor, Scalar::of(1.0 / 3.0));
  CHECK(below.status == Status::ConditionsViolated);

  CHECK_THROWS_AS(certify_linear(cantor, Scalar::of(0.0)), InvariantError);
}

TEST_CASE("homogeneous pair certification") {
  HomogeneousIFS cantor = fixtures::cantor_ifs();
  Verdict half = certify_ifs(bundle("x + 0.5*y"), cantor, cantor, unit());
  CHECK(half.certified());

  Verdict wavy = certify_ifs(bundle("sin(-0.5*x*y) + 12*x + 6*y"), cantor, cantor, unit());
  CHECK(wavy.certified());
  CHECK(*wavy.sign_case == SignCase::PP);

  Verdict diff = certify_ifs(bundle("x - y"), cantor, cantor, unit());
  CHECK(diff.certified());
  CHECK(*diff.sign_case == SignCase::PN);

  HomogeneousIFS other(Scalar::rational(1, 4), {Scalar::rational(0, 1), Scalar::rational(3, 4)});
  CHECK_THROWS_AS(certify_ifs(bundle("x + y"), cantor, other, unit()), InvariantError);

  HomogeneousIFS full(Scalar::rational(1, 2), {Scalar::rational(0, 1), Scalar::rational(1, 2)});
  CHECK_THROWS_AS(certify_ifs(bundle("x + y"), full, full, unit()), InvariantError);
}

TEST_CASE("sandwich certification") {
  PartialBundle b = PartialBundle::of(fixtures::example9_expr());
  GeneralIFS K = fixtures::mixed_ratio_ifs();
  HomogeneousIFS sub = fixtures::cantor_ifs();
  SandwichResult res = certify_sandwich(b, K, sub, {"1", "3"});
  CHECK(res.verdict.certified());
  REQUIRE(res.image.has_value());
  CHECK(res.image->lo == doctest::Approx(0.0));
  CHECK(res.image->hi == doctest::Approx(11.5).epsilon(1e-14));

  CHECK_THROWS_AS(certify_sandwich(b, K, sub, {"2", "3"}), InvariantError);
}

TEST_CASE("middle-third constants") {
  CantorConstants c = cantor_constants();
  CHECK(c.ratio_lo == Rat{1, 3});
  CHECK(c.ratio_hi == Rat{1, 1});
  CHECK(c.x_side_form[0] == Rat{1, 1});
  CHECK(c.x_side_form[1] == Rat{-6, 1});
  CHECK(c.x_side_form[2] == Rat{9, 1});
  CHECK(c.y_side_form[0] == Rat{1, 1});
  CHECK(c.y_side_form[1] == Rat{-2, 1});
  CHECK(c.y_side_form[2] == Rat{1, 1});
}

TEST_CASE("second-order sign fast path") {
  // fxx = 2 >= 0, fxy = -0.5 <= 0, fyy = 2 >= 0
  Verdict ok = certify_second_order_signs(bundle("x^2 + y^2 + 6*x + 3*y - 0.5*x*y"), unit());
  CHECK(ok.certified());
  // the wavy instance also satisfies the sign pattern
  Verdict wavy = certify_second_order_signs(bundle("sin(-0.5*x*y) + 12*x + 6*y"), unit());
  CHECK(wavy.certified());
  // positive mixed partial fails
  Verdict bad = certify_second_order_signs(bundle("x^2 + y^2 + 0.5*x*y"), unit());
  CHECK(bad.status == Status::ConditionsViolated);
}

TEST_CASE("budget growth only resolves unknowns") {
  // fxx = x^2 - 2xy + y^2 + 1/20: positive, but the termwise enclosure needs
  // subdivision near the diagonal before the margin shows.
  PartialBundle b = bundle("x^4/12 - x^3*y/3 + x^2*y^2/2 + x^2/40");
  Verdict tiny = certify_quadform_nonneg(1.0, 0.0, b, unit(), SearchBudget{40, 40});
  CHECK(tiny.status == Status::Unknown);
  Verdict big = certify_quadform_nonneg(1.0, 0.0, b, unit(), SearchBudget{200000, 40});
  CHECK(big.certified());

  // certified and violated outcomes are stable across budgets
  for (long budget : {100L, 10000L, 200000L}) {
    SearchBudget sb{budget, 40};
    CHECK(certify_quadform_nonneg(1.0, -1.0, bundle("x^2+y^2+6*x+3*y+0.5*x*y"), unit(), sb)
              .certified());
    CHECK(certify_quadform_nonneg(1.0, 1.0, bundle("-x^2 - y^2"), unit(), sb).status ==
          Status::ConditionsViolated);
    auto sign = classify_signs(bundle("x + 0.5*y"), unit(), sb);
    REQUIRE(sign.sign.has_value());
    CHECK(*sign.sign == SignCase::PP);
  }

  // a genuine interior zero of the termwise form stays unknown at any budget
  PartialBundle zero_edge = bundle("x^4/12 - x^3*y/3 + x^2*y^2/2");
  CHECK(certify_quadform_nonneg(1.0, 0.0, zero_edge, unit(), SearchBudget{40, 40}).status ==
        Status::Unknown);
  CHECK(certify_quadform_nonneg(1.0, 0.0, zero_edge, unit(), SearchBudget{50000, 25}).status ==
        Status::Unknown);
}

TEST_CASE("ratio verdicts are scale invariant") {
  const double lo = 0.4, hi = 0.9;
  for (const char* base : {"x + 0.5*y + 0.1*x*y", "x + 2*y"}) {
    std::string scaled = "3*(" + std::string(base) + ")";
    auto sign1 = classify_signs(bundle(base), unit());
    auto sign2 = classify_signs(bundle(scaled.c_str()), unit());
    REQUIRE(sign1.sign.has_value());
    REQUIRE(sign2.sign.has_value());
    CHECK(*sign1.sign == *sign2.sign);
    Verdict v1 = certify_ratio_bounds(lo, hi, *sign1.sign, bundle(base), unit());
    Verdict v2 = certify_ratio_bounds(lo, hi, *sign2.sign, bundle(scaled.c_str()), unit());
    CHECK(v1.status == v2.status);
  }
}

TEST_CASE("verdicts carry deterministic witnesses") {
  Verdict a = certify_quadform_nonneg(1.0, 1.0, bundle("-x^2 - y^2"), unit());
  Verdict b = certify_quadform_nonneg(1.0, 1.0, bundle("-x^2 - y^2"), unit());
  REQUIRE(a.witness.has_value());
  REQUIRE(b.witness.has_value());
  CHECK(a.witness->box.x == b.witness->box.x);
  CHECK(a.witness->box.y == b.witness->box.y);
  CHECK(a.witness->enclosure == b.witness->enclosure);
}
