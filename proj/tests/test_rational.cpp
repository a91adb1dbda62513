#include <doctest.h>

#include "fractim/rational.hpp"

using namespace fractim;

TEST_CASE("rational arithmetic stays reduced") {
  Rat third = *Rat::make(1, 3);
  Rat two_thirds = *rat_add(third, third);
  CHECK(two_thirds == Rat{2, 3});
  CHECK(*rat_add(third, two_thirds) == Rat{1, 1});
  CHECK(*rat_mul(Rat{2, 3}, Rat{3, 4}) == Rat{1, 2});
  CHECK(*rat_div(third, third) == Rat{1, 1});
  CHECK(*Rat::make(-4, -6) == Rat{2, 3});
  CHECK(*Rat::make(4, -6) == Rat{-2, 3});
}

TEST_CASE("rational overflow reports instead of wrapping") {
  Rat big = *Rat::make(1, 3037000499LL);
  CHECK(!rat_mul(*rat_mul(big, big), big).has_value());
}

TEST_CASE("double vs rational comparison is exact near 1/3") {
  Rat third{1, 3};
  double nearest = 1.0 / 3.0;  // strictly below 1/3
  CHECK(rat_cmp(nearest, third) < 0);
  CHECK(rat_cmp(third.to_double_up(), third) > 0);
  CHECK(rat_cmp(third.to_double_down(), third) < 0);
  CHECK(third.to_double_down() == nearest);
  CHECK(rat_cmp(1.0, Rat{1, 1}) == 0);
  CHECK(rat_cmp(0.0, Rat{0, 1}) == 0);
  CHECK(rat_cmp(-0.5, Rat{-1, 2}) == 0);
  CHECK(rat_cmp(1e300, Rat{1, 3}) > 0);
  CHECK(rat_cmp(-1e300, Rat{1, 3}) < 0);
  CHECK(rat_cmp(1e-300, Rat{1, 3}) < 0);
  CHECK(rat_cmp(-1e-300, Rat{-1, 3}) > 0);
}

TEST_CASE("scalar parse accepts fractions and exact dyadics") {
  Scalar third = *Scalar::parse("1/3");
  CHECK(third.has_exact());
  CHECK(*third.exact == Rat{1, 3});
  Scalar quarter = *Scalar::parse("0.25");
  CHECK(quarter.has_exact());
  CHECK(*quarter.exact == Rat{1, 4});
  Scalar two = Scalar::of(2.0);
  CHECK(*two.exact == Rat{2, 1});
  // fl(0.3) is a dyadic in its own right, distinct from 3/10.
  Scalar point_three = Scalar::of(0.3);
  REQUIRE(point_three.has_exact());
  CHECK(rat_cmp(*point_three.exact, Rat{3, 10}) != 0);
  CHECK(rat_cmp(0.3, *point_three.exact) == 0);
}

TEST_CASE("scalar arithmetic keeps exactness alive") {
  Scalar c = Scalar::rational(1, 3);
  Scalar one = Scalar::rational(1, 1);
  Scalar span = c * (Scalar::rational(2, 1));  // branching 2 case
  Scalar window_hi = c / (one - span);
  REQUIRE(window_hi.has_exact());
  CHECK(*window_hi.exact == Rat{1, 1});
  Scalar sum = c + span;
  REQUIRE(sum.has_exact());
  CHECK(rat_cmp(*sum.exact, Rat{1, 1}) == 0);
  // The double route misses the boundary: the computed upper window endpoint
  // falls strictly below 1, so s = 1 would not certify without the rationals.
  CHECK(c.v / (1.0 - span.v) < 1.0);
}

TEST_CASE("directed rounding brackets the exact value") {
  Scalar s = Scalar::rational(2, 3);
  CHECK(s.lower() < s.upper());
  CHECK(rat_cmp(s.lower(), *s.exact) < 0);
  CHECK(rat_cmp(s.upper(), *s.exact) > 0);
  Scalar exact_half = Scalar::rational(1, 2);
  CHECK(exact_half.lower() == 0.5);  // representable: both directions collapse
  CHECK(exact_half.upper() == 0.5);
}
