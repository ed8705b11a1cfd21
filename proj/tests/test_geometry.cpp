#include <doctest.h>

#include <cmath>
#include <numbers>

#include "anisofreq/error.hpp"
#include "anisofreq/geometry.hpp"

using namespace anisofreq;

namespace {

constexpr double kPi = std::numbers::pi;

// Axis-aligned bounding box of a polygonal domain.
struct Box {
  double x0, x1, y0, y1;
};

Box bounds(const DomainSpec& d) {
  const Polygon p = polygonize(d, 16);
  Box b{1e300, -1e300, 1e300, -1e300};
  for (const Vec2 v : p.vertices) {
    b.x0 = std::min(b.x0, v.x);
    b.x1 = std::max(b.x1, v.x);
    b.y0 = std::min(b.y0, v.y);
    b.y1 = std::max(b.y1, v.y);
  }
  return b;
}

}  // namespace

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(DomainSpec{Disk{{0, 0}, 0.0}}), Error);
  CHECK_THROWS_AS(validate(DomainSpec{Rectangle{1.0, -1.0}}), Error);
  CHECK_THROWS_AS(validate(Polygon{{{0, 0}, {1, 0}}}), Error);
  // Clockwise.
  CHECK_THROWS_AS(validate(Polygon{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}}), Error);
  // Bow tie.
  CHECK_THROWS_AS(validate(Polygon{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}}), Error);
  CHECK_NOTHROW(validate(domains::l_shape()));
}

TEST_CASE("rotate") {
  SUBCASE("centered disk is fixed") {
    const DomainSpec d = rotate(domains::unit_disk(), 0.7);
    REQUIRE(std::holds_alternative<Disk>(d));
    CHECK(std::get<Disk>(d).radius == 1.0);
    CHECK(std::abs(std::get<Disk>(d).center.x) < 1e-15);
  }
  SUBCASE("square at a quarter turn is the same set") {
    const Box b = bounds(rotate(domains::square(), kPi / 2));
    CHECK(b.x0 == doctest::Approx(-1.0));
    CHECK(b.x1 == doctest::Approx(1.0));
    CHECK(b.y0 == doctest::Approx(-1.0));
    CHECK(b.y1 == doctest::Approx(1.0));
  }
  SUBCASE("R_0.25 at a quarter turn") {
    const Box b = bounds(rotate(domains::rectangle_ra(0.25), kPi / 2));
    CHECK(b.x0 == doctest::Approx(-2.0));
    CHECK(b.x1 == doctest::Approx(2.0));
    CHECK(b.y0 == doctest::Approx(-1.0));
    CHECK(b.y1 == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(rotate(domains::square(), -0.1), Error);
  CHECK_THROWS_AS(rotate(domains::square(), 2.0), Error);
}

TEST_CASE("rotation preserves area and composes") {
  for (const DomainSpec& d : {domains::square(), domains::l_shape(), domains::rectangle_ra(0.3)}) {
    for (double t : {0.1, 0.5, 1.2, kPi / 2}) CHECK(area(rotate(d, t)) == doctest::Approx(area(d)).epsilon(1e-12));
    const Polygon twice = polygonize(rotate(rotate(d, 0.3), 0.5), 16);
    const Polygon once = polygonize(rotate(d, 0.8), 16);
    REQUIRE(twice.vertices.size() == once.vertices.size());
    for (std::size_t k = 0; k < once.vertices.size(); ++k) {
      CHECK(std::abs(twice.vertices[k].x - once.vertices[k].x) < 1e-12);
      CHECK(std::abs(twice.vertices[k].y - once.vertices[k].y) < 1e-12);
    }
  }
}

TEST_CASE("shear_y") {
  CHECK(area(shear_y(domains::l_shape(), 1.0)) == doctest::Approx(3.0));
  const DomainSpec e = shear_y(domains::unit_disk(), 0.25);
  REQUIRE(std::holds_alternative<Ellipse>(e));
  CHECK(area(e) == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(std::get<Ellipse>(e).point(kPi / 2).y == doctest::Approx(0.5));
  const Box b = bounds(shear_y(domains::rectangle_ra(0.25), 0.25));
  CHECK(b.y0 == doctest::Approx(-1.0));
  CHECK(b.y1 == doctest::Approx(1.0));
  CHECK(b.x1 == doctest::Approx(1.0));
  for (double a : {0.1, 0.25, 0.9})
    for (const DomainSpec& d : {domains::l_shape(), rotate(domains::square(), 0.4)})
      CHECK(area(shear_y(d, a)) == doctest::Approx(std::sqrt(a) * area(d)).epsilon(1e-12));
  CHECK_THROWS_AS(shear_y(domains::square(), 0.0), Error);
  CHECK_THROWS_AS(shear_y(domains::square(), 1.5), Error);
}

TEST_CASE("area") {
  CHECK(area(domains::unit_disk()) == doctest::Approx(kPi));
  CHECK(area(domains::square()) == 4.0);
  CHECK(area(domains::rectangle_ra(0.25)) == doctest::Approx(8.0));
  CHECK(area(domains::l_shape()) == doctest::Approx(3.0));
}

TEST_CASE("polygonize") {
  // Inscribed n-gon area (n/2) sin(2 pi / n) differs from pi by 1.2e-6 at n = 4096.
  CHECK(std::abs(area(polygonize(domains::unit_disk(), 4096)) - kPi) < 1e-5);
  CHECK(std::abs(area(polygonize(shear_y(domains::unit_disk(), 0.25), 4096)) - kPi / 2) < 1e-5);
  const Polygon sq = polygonize(domains::square(), 64);
  CHECK(sq.vertices.size() == 4);
  CHECK(area(sq) == 4.0);
  CHECK_THROWS_AS(polygonize(domains::unit_disk(), 8), Error);
}

TEST_CASE("transformed domain realizes rotation then shear") {
  const TransformedDomain t{domains::square(), kPi / 4, 0.25};
  const Box b = bounds(t.realize());
  CHECK(b.x1 == doctest::Approx(std::sqrt(2.0)));
  CHECK(b.y1 == doctest::Approx(0.5 * std::sqrt(2.0)));
  CHECK(area(t.realize()) == doctest::Approx(2.0));
}
