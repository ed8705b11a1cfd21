#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "anisofreq/error.hpp"
#include "anisofreq/mesh.hpp"
#include "anisofreq/solver.hpp"

using namespace anisofreq;

namespace {

void check_conforming(const Mesh& m) {
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : m.triangles())
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      ++edges[{std::min(a, b), std::max(a, b)}];
    }
  std::size_t boundary_edges = 0;
  for (const auto& [e, n] : edges) {
    REQUIRE(n <= 2);
    if (n == 1) {
      ++boundary_edges;
      REQUIRE(m.is_boundary(e.first));
      REQUIRE(m.is_boundary(e.second));
    }
  }
  // Each closed boundary loop has as many edges as nodes.
  CHECK(boundary_edges == m.boundary_node_count());
  for (std::size_t t = 0; t < m.triangle_count(); ++t) REQUIRE(m.tri_area(t) > 0.0);
}

}  // namespace

TEST_CASE("triangulate") {
  SUBCASE("square gives two triangles") {
    const Mesh m = triangulate(polygonize(domains::square(), 16));
    CHECK(m.triangle_count() == 2);
    CHECK(m.total_area() == doctest::Approx(4.0));
  }
  SUBCASE("convex n-gon gives n - 2 triangles") {
    for (int n : {16, 33, 64}) {
      const Mesh m = triangulate(polygonize(domains::unit_disk(), n));
      CHECK(m.triangle_count() == static_cast<std::size_t>(n - 2));
    }
  }
  SUBCASE("L-shape") {
    const Mesh m = triangulate(std::get<Polygon>(domains::l_shape()));
    CHECK(m.triangle_count() == 4);
    CHECK(m.total_area() == doctest::Approx(3.0).epsilon(1e-14));
    check_conforming(m);
  }
  CHECK_THROWS_AS(triangulate(Polygon{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}}), Error);
}

TEST_CASE("refine") {
  const Mesh coarse = triangulate(polygonize(domains::square(), 16));
  const Mesh same = refine(coarse, 0);
  CHECK(same.node_count() == coarse.node_count());
  CHECK(same.triangle_count() == coarse.triangle_count());
  const Mesh fine = refine(coarse, 3);
  CHECK(fine.triangle_count() == 128);
  CHECK(fine.node_count() == 81);
  CHECK(fine.boundary_node_count() == 32);
  CHECK(fine.total_area() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(fine.min_angle() >= coarse.min_angle() - 1e-12);
  check_conforming(fine);

  const Mesh l = build_mesh(domains::l_shape(), {4});
  CHECK(l.triangle_count() == 4 * 256);
  CHECK(l.total_area() == doctest::Approx(3.0).epsilon(1e-12));
  check_conforming(l);
}

TEST_CASE("curved domains snap boundary nodes onto the curve") {
  const Mesh m = build_mesh(domains::unit_disk(), {4});
  check_conforming(m);
  CHECK(m.boundary_node_count() == 16 * 16);
  for (std::size_t i = 0; i < m.node_count(); ++i) {
    if (!m.is_boundary(i)) continue;
    const Vec2 v = m.nodes()[i];
    REQUIRE(std::hypot(v.x, v.y) == doctest::Approx(1.0).epsilon(1e-14));
  }
  // Inscribed 256-gon area.
  CHECK(m.total_area() == doctest::Approx(128 * std::sin(2 * std::numbers::pi / 256)).epsilon(1e-12));
}

TEST_CASE("gradients reproduce affine functions exactly") {
  for (const DomainSpec& d : {domains::square(), domains::l_shape(), domains::unit_disk(),
                              shear_y(rotate(domains::square(), 0.3), 0.2)}) {
    const Mesh m = build_mesh(d, {3});
    std::vector<double> u(m.node_count());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.3 - 1.7 * m.nodes()[i].x + 2.5 * m.nodes()[i].y;
    for (std::size_t t = 0; t < m.triangle_count(); ++t) {
      const Vec2 g = m.gradient(t, u);
      REQUIRE(std::abs(g.x + 1.7) < 1e-12);
      REQUIRE(std::abs(g.y - 2.5) < 1e-12);
    }
  }
}

TEST_CASE("interior dof map") {
  CHECK_THROWS_AS(interior_dof_map(triangulate(polygonize(domains::square(), 16))), Error);
  const Mesh m = build_mesh(domains::square(), {2});
  const DofMap map = interior_dof_map(m);
  // Level 2 on the square: a 5 x 5 node grid with 3 x 3 interior.
  CHECK(map.dof_to_node.size() == 9);
  CHECK(map.dof_to_node.size() + m.boundary_node_count() == m.node_count());
  for (std::size_t k = 0; k < map.dof_to_node.size(); ++k)
    CHECK(map.node_to_dof[static_cast<std::size_t>(map.dof_to_node[k])] == static_cast<int>(k));
}

TEST_CASE("eigenvalue decreases under refinement on nested meshes") {
  for (const DomainSpec& d : {domains::square(), domains::l_shape()}) {
    double prev = 1e300;
    for (int level = 2; level <= 5; ++level) {
      const double lambda = solve_p2(build_mesh(d, {level}), QuadForm::identity()).lambda;
      CHECK(lambda < prev);
      prev = lambda;
    }
  }
}

TEST_CASE("csv export") {
  const Mesh m = build_mesh(domains::square(), {1});
  const std::string nodes = nodes_csv(m);
  CHECK(nodes.rfind("id,x,y,boundary\n", 0) == 0);
  CHECK(std::count(nodes.begin(), nodes.end(), '\n') == static_cast<long>(m.node_count() + 1));
  const std::string tris = triangles_csv(m);
  CHECK(tris.rfind("id,n0,n1,n2\n", 0) == 0);
  CHECK(std::count(tris.begin(), tris.end(), '\n') == static_cast<long>(m.triangle_count() + 1));
}
