#include <doctest.h>

#include <cmath>
#include <random>

#include "fractim/interval.hpp"

using namespace fractim;

namespace {

IntervalSet make(std::initializer_list<Interval> items, double tol = 0.0) {
  return normalize(std::vector<Interval>(items), tol);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace

TEST_CASE("interval construction validates") {
  CHECK_THROWS_AS(Interval(1.0, 0.0), InvariantError);
  CHECK_THROWS_AS(Interval(0.0, std::numeric_limits<double>::infinity()), InvariantError);
  CHECK(Interval::hull(1.0, 0.0) == Interval(0.0, 1.0));
}

TEST_CASE("normalize merges touching intervals") {
  IntervalSet s = make({Interval(0, 1.0 / 3), Interval(2.0 / 3, 1), Interval(1.0 / 3, 2.0 / 3)});
  CHECK(s.size() == 1);
  CHECK(s.items()[0] == Interval(0, 1));
}

TEST_CASE("normalize keeps the product-level gap") {
  // corner enumeration of x*y over the first-level middle-third boxes
  IntervalSet s = make({Interval(0, 1.0 / 9), Interval(0, 1.0 / 3), Interval(4.0 / 9, 1)});
  REQUIRE(s.size() == 2);
  CHECK(s.items()[0] == Interval(0, 1.0 / 3));
  CHECK(s.items()[1] == Interval(4.0 / 9, 1));
}

TEST_CASE("normalize bridges gaps under the tolerance") {
  IntervalSet s = normalize({Interval(0, 0.5), Interval(0.5000001, 1)}, 1e-6);
  CHECK(s.size() == 1);
  CHECK(s.items()[0] == Interval(0, 1));
}

TEST_CASE("normalize rejects empty input") {
  CHECK_THROWS_AS(normalize({}, 0.0), InvariantError);
}

TEST_CASE("set_equal compares counts then endpoints") {
  CHECK(set_equal(make({Interval(0, 2)}), make({Interval(0, 2)}), 0.0));
  CHECK_FALSE(set_equal(make({Interval(0, 1.0 / 3), Interval(4.0 / 9, 1)}),
                        make({Interval(0, 1)}), 1e-9));
  CHECK(set_equal(make({Interval(0, 2)}), make({Interval(0, 2 + 5e-10)}), 1e-9));
}

TEST_CASE("component count, subset, hausdorff") {
  IntervalSet two = make({Interval(0, 1.0 / 3), Interval(4.0 / 9, 1)});
  CHECK(component_count(two) == 2);
  CHECK(subset_of(make({Interval(0, 1)}), make({Interval(0, 2)}), 0.0));
  CHECK_FALSE(subset_of(make({Interval(0, 2)}), make({Interval(0, 1)}), 0.0));
  double d = hausdorff_distance(make({Interval(0, 1)}),
                                make({Interval(0, 1.0 / 3), Interval(2.0 / 3, 1)}));
  CHECK(d == doctest::Approx(1.0 / 6).epsilon(1e-12));
}

TEST_CASE("hausdorff distance matches a dense sampling oracle") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Interval> a_raw, b_raw;
    int na = 1 + static_cast<int>(rng() % 3), nb = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < na; ++i) {
      double lo = uniform(rng, 0, 0.9);
      a_raw.push_back(Interval(lo, lo + uniform(rng, 0.01, 0.4)));
    }
    for (int i = 0; i < nb; ++i) {
      double lo = uniform(rng, 0, 0.9);
      b_raw.push_back(Interval(lo, lo + uniform(rng, 0.01, 0.4)));
    }
    IntervalSet a = normalize(a_raw, 0.0), b = normalize(b_raw, 0.0);

    auto sample_dist = [](const IntervalSet& from, const IntervalSet& to) {
      double worst = 0.0;
      for (const Interval& c : from.items()) {
        for (int t = 0; t <= 2000; ++t) {
          double x = c.lo + (c.hi - c.lo) * t / 2000.0;
          double best = 1e300;
          for (const Interval& d2 : to.items()) {
            if (d2.contains(x)) best = 0.0;
            best = std::min({best, std::fabs(x - d2.lo), std::fabs(x - d2.hi)});
          }
          worst = std::max(worst, best);
        }
      }
      return worst;
    };
    double oracle = std::max(sample_dist(a, b), sample_dist(b, a));
    CHECK(hausdorff_distance(a, b) == doctest::Approx(oracle).epsilon(1e-3));
  }
}

TEST_CASE("normalize is idempotent and preserves the union") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Interval> raw;
    int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      double lo = uniform(rng, 0, 1);
      raw.push_back(Interval(lo, lo + uniform(rng, 0, 0.3)));
    }
    double tol = (rng() % 2 == 0) ? 0.0 : 1e-3;
    IntervalSet s = normalize(raw, tol);
    IntervalSet again = normalize(s.items(), tol);
    CHECK(set_equal(s, again, 0.0));
    // input points stay inside; output points stay within tol of the input
    for (const Interval& iv : raw) {
      CHECK(subset_of(normalize({iv}, 0.0), s, 1e-15));
    }
    CHECK(subset_of(s, normalize(raw, 0.0), tol + 1e-15));
    // gaps strictly wider than the tolerance
    for (std::size_t i = 1; i < s.size(); ++i)
      CHECK(s.items()[i].lo - s.items()[i - 1].hi > tol);
  }
}

TEST_CASE("set_equal at zero tolerance is an equivalence") {
  IntervalSet a = make({Interval(0, 1), Interval(2, 3)});
  IntervalSet b = make({Interval(0, 1), Interval(2, 3)});
  IntervalSet c = make({Interval(0, 1), Interval(2, 3.5)});
  CHECK(set_equal(a, a, 0.0));
  CHECK(set_equal(a, b, 0.0));
  CHECK(set_equal(b, a, 0.0));
  CHECK_FALSE(set_equal(a, c, 0.0));
}

TEST_CASE("outward interval arithmetic keeps exact zeros") {
  Interval one(1.0, 1.0);
  Interval z = enclose::sub(one, one);
  CHECK(z.lo == 0.0);
  CHECK(z.hi == 0.0);
  Interval scaled = enclose::scale(0.0, Interval(-5, 7));
  CHECK(scaled.lo == 0.0);
  CHECK(scaled.hi == 0.0);
  Interval copy = enclose::scale(1.0, Interval(0.1, 0.2));
  CHECK(copy == Interval(0.1, 0.2));
  CHECK_THROWS_AS(enclose::div(one, Interval(-1, 1)), DomainError);
}
