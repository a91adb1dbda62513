#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fractim/demos.hpp"
#include "fractim/image.hpp"
#include "fractim/oracle.hpp"

using namespace fractim;

namespace {

PartialBundle bundle(const char* text) { return PartialBundle::of(Expr::parse(text)); }

}  // namespace

TEST_CASE("sample points are the construction endpoints") {
  auto pts = sample_points(fixtures::cantor_ifs(), 2);
  const double want[] = {0, 1.0 / 9, 2.0 / 9, 1.0 / 3, 2.0 / 3, 7.0 / 9, 8.0 / 9, 1};
  REQUIRE(pts.size() == 8);
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(pts[i] == doctest::Approx(want[i]).epsilon(1e-14));

  auto gen = sample_points(fixtures::mixed_ratio_ifs(), 1);
  const double want_gen[] = {0, 1.0 / 4, 1.0 / 3, 2.0 / 3, 1};
  REQUIRE(gen.size() == 5);
  for (std::size_t i = 0; i < gen.size(); ++i)
    CHECK(gen[i] == doctest::Approx(want_gen[i]).epsilon(1e-14));

  MoranRealization r = realize(fixtures::cantor_class(), 1, Placement::Uniform);
  auto moran = sample_points(r, 1);
  REQUIRE(moran.size() == 4);
  CHECK(moran[0] == 0.0);
  CHECK(moran[1] == doctest::Approx(1.0 / 3));
  CHECK(moran[2] == doctest::Approx(2.0 / 3));
  CHECK(moran[3] == 1.0);
}

TEST_CASE("sample sets refine monotonically and stay in the cylinders") {
  HomogeneousIFS cantor = fixtures::cantor_ifs();
  auto coarse = sample_points(cantor, 3);
  auto fine = sample_points(cantor, 4);
  for (double p : coarse)
    CHECK(std::binary_search(fine.begin(), fine.end(), p));
  // membership: every depth-4 sample lies inside some depth-2 cylinder
  auto cyl = cylinders(cantor, 2);
  for (double p : fine) {
    bool inside = false;
    for (const Interval& iv : cyl) inside = inside || iv.contains(p);
    CHECK(inside);
  }
}

TEST_CASE("brute force image of the sum covers [0,2] densely") {
  auto pts = sample_points(fixtures::cantor_ifs(), 8);
  IntervalSet img = brute_force_image(bundle("x+y"), pts, pts, 0.01);
  REQUIRE(img.size() == 1);
  CHECK(img.min() == doctest::Approx(0.0));
  CHECK(img.max() == doctest::Approx(2.0));
}

TEST_CASE("brute force image of the product avoids the first hole") {
  auto pts = sample_points(fixtures::cantor_ifs(), 6);
  IntervalSet img = brute_force_image(bundle("x*y"), pts, pts, 0.005);
  bool overlaps_hole = false;
  for (const Interval& iv : img.items()) {
    if (iv.lo < 4.0 / 9 - 1e-9 && iv.hi > 1.0 / 3 + 1e-9) overlaps_hole = true;
  }
  CHECK_FALSE(overlaps_hole);
  // the sampled values themselves are contained in the level-6 exact image;
  // merge at zero so tolerance bridging cannot blur across its narrow gaps
  MoranRealization r = realize(fixtures::cantor_class(), 6, Placement::Uniform);
  auto C = level_intervals(r, 6);
  IntervalSet exact = level_image(bundle("x*y"), std::nullopt, C, C, 1e-9);
  IntervalSet points = brute_force_image(bundle("x*y"), pts, pts, 0.0);
  OracleComparison cmp = compare_images(points, exact, 1e-12);
  CHECK(cmp.contained);
}

TEST_CASE("quotient truncation covers its window") {
  PartialBundle b = bundle("x/y");
  auto xs = sample_points(fixtures::cantor_ifs(), 8);
  auto ys = xs;
  ys.erase(std::remove_if(ys.begin(), ys.end(), [](double v) { return v < 2.0 / 3.0 - 1e-12; }),
           ys.end());
  CHECK(ys.front() == doctest::Approx(2.0 / 3));
  CoverageScan scan = coverage_scan(b, xs, ys, Interval(2.0 / 3 - 1e-9, 1.5 + 1e-9));
  CHECK(scan.max_gap < 0.02);
  CHECK(scan.min_value <= 2.0 / 3 + 1e-9);
  CHECK(scan.max_value >= 1.5 - 1e-6);
}

TEST_CASE("oracle containment in exact level images") {
  MoranRealization r = realize(fixtures::cantor_class(), 8, Placement::Uniform);
  auto C = level_intervals(r, 8);
  PartialBundle b = bundle("x+y");
  IntervalSet exact = level_image(b, SignCase::PP, C, C, 1e-9);
  auto pts = sample_points(fixtures::cantor_ifs(), 8);
  IntervalSet oracle = brute_force_image(b, pts, pts, 0.01);
  OracleComparison cmp = compare_images(oracle, exact, 1e-9);
  CHECK(cmp.contained);
  CHECK(cmp.hausdorff < 2.0 * std::pow(3.0, -8) * 2.0);  // spacing x slope bound

  // negative control: a corrupted exact set is flagged
  IntervalSet corrupted = normalize({Interval(0.2, 2.0)}, 0.0);
  CHECK_FALSE(compare_images(oracle, corrupted, 1e-9).contained);
}

TEST_CASE("domain errors and caps are reported") {
  auto pts = sample_points(fixtures::cantor_ifs(), 2);
  CHECK_THROWS_AS(brute_force_image(bundle("x/y"), pts, pts, 0.01), DomainError);
  std::vector<double> big(4000);
  for (std::size_t i = 0; i < big.size(); ++i) big[i] = static_cast<double>(i) / big.size();
  CHECK_THROWS_AS(brute_force_image(bundle("x+y"), big, big, 0.01), CapacityError);
}
