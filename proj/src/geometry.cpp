#include "anisofreq/geometry.hpp"

#include <cmath>
#include <numbers>

#include "anisofreq/error.hpp"

namespace anisofreq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::vector<Vec2> rectangle_vertices(const Rectangle& r) {
  return {{-r.halfwidth, -r.halfheight}, {r.halfwidth, -r.halfheight}, {r.halfwidth, r.halfheight},
          {-r.halfwidth, r.halfheight}};
}

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

Polygon map_polygon(const std::vector<Vec2>& vertices, const Mat2& m) {
  Polygon out;
  out.vertices.reserve(vertices.size());
  for (const auto& v : vertices) out.vertices.push_back(m * v);
  return out;
}

}  // namespace

Vec2 Ellipse::point(double t) const { return center + map * Vec2{std::cos(t), std::sin(t)}; }

double signed_area(const std::vector<Vec2>& vertices) {
  double twice = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) twice += cross(vertices[i], vertices[(i + 1) % n]);
  return 0.5 * twice;
}

void validate(const Polygon& p) {
  const auto& v = p.vertices;
  const std::size_t n = v.size();
  require(n >= 3, "polygon needs at least 3 vertices");
  for (const auto& x : v) require(std::isfinite(x.x) && std::isfinite(x.y), "polygon vertex is not finite");
  require(signed_area(v) > 0.0, "polygon must be counterclockwise with positive area");
  for (std::size_t i = 0; i < n; ++i) {
    require(norm(v[(i + 1) % n] - v[i]) > 0.0, "polygon has repeated consecutive vertices");
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      require(!segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]), "polygon is self-intersecting");
    }
  }
}

void validate(const DomainSpec& d) {
  std::visit(overloaded{
                 [](const Disk& x) { require(x.radius > 0.0 && std::isfinite(x.radius), "disk radius must be > 0"); },
                 [](const Rectangle& x) {
                   require(x.halfwidth > 0.0 && x.halfheight > 0.0, "rectangle half-extents must be > 0");
                 },
                 [](const Polygon& x) { validate(x); },
                 [](const Ellipse& x) { require(x.map.det() > 0.0, "ellipse map must preserve orientation"); },
             },
             d);
}

DomainSpec rotate(const DomainSpec& d, double theta) {
  require(theta >= 0.0 && theta <= std::numbers::pi / 2, "rotation angle must lie in [0, pi/2]");
  const Mat2 rt = rotation(theta).transpose();
  return std::visit(overloaded{
                        [&](const Disk& x) -> DomainSpec { return Disk{rt * x.center, x.radius}; },
                        [&](const Rectangle& x) -> DomainSpec {
                          if (theta == 0.0) return x;
                          return map_polygon(rectangle_vertices(x), rt);
                        },
                        [&](const Polygon& x) -> DomainSpec { return map_polygon(x.vertices, rt); },
                        [&](const Ellipse& x) -> DomainSpec { return Ellipse{rt * x.center, rt * x.map}; },
                    },
                    d);
}

DomainSpec shear_y(const DomainSpec& d, double a) {
  require(a > 0.0 && a <= 1.0, "shear parameter must lie in (0, 1]");
  if (a == 1.0) return d;
  const double s = std::sqrt(a);
  const Mat2 shear = Mat2::diag(1.0, s);
  return std::visit(overloaded{
                        [&](const Disk& x) -> DomainSpec {
                          return Ellipse{shear * x.center, Mat2::diag(x.radius, s * x.radius)};
                        },
                        [&](const Rectangle& x) -> DomainSpec { return Rectangle{x.halfwidth, s * x.halfheight}; },
                        [&](const Polygon& x) -> DomainSpec { return map_polygon(x.vertices, shear); },
                        [&](const Ellipse& x) -> DomainSpec { return Ellipse{shear * x.center, shear * x.map}; },
                    },
                    d);
}

double area(const DomainSpec& d) {
  return std::visit(overloaded{
                        [](const Disk& x) { return std::numbers::pi * x.radius * x.radius; },
                        [](const Rectangle& x) { return 4.0 * x.halfwidth * x.halfheight; },
                        [](const Polygon& x) { return signed_area(x.vertices); },
                        [](const Ellipse& x) { return std::numbers::pi * x.map.det(); },
                    },
                    d);
}

bool is_curved(const DomainSpec& d) {
  return std::holds_alternative<Disk>(d) || std::holds_alternative<Ellipse>(d);
}

Ellipse as_ellipse(const DomainSpec& d) {
  if (const auto* disk = std::get_if<Disk>(&d)) return {disk->center, Mat2::diag(disk->radius, disk->radius)};
  if (const auto* e = std::get_if<Ellipse>(&d)) return *e;
  throw Error(ErrorCode::InvalidArgument, "domain has no curved boundary");
}

Polygon polygonize(const DomainSpec& d, int n_boundary) {
  require(n_boundary >= 16, "polygonize needs at least 16 boundary vertices");
  if (const auto* p = std::get_if<Polygon>(&d)) return *p;
  if (const auto* r = std::get_if<Rectangle>(&d)) return {rectangle_vertices(*r)};
  const Ellipse e = as_ellipse(d);
  Polygon out;
  out.vertices.reserve(n_boundary);
  for (int k = 0; k < n_boundary; ++k) out.vertices.push_back(e.point(2.0 * std::numbers::pi * k / n_boundary));
  return out;
}

namespace domains {

DomainSpec l_shape() { return Polygon{{{-1, -1}, {1, -1}, {1, 0}, {0, 0}, {0, 1}, {-1, 1}}}; }

DomainSpec rectangle_ra(double a) {
  require(a > 0.0 && a <= 1.0, "R_a needs a in (0, 1]");
  return Rectangle{1.0, 1.0 / std::sqrt(a)};
}

}  // namespace domains

}  // namespace anisofreq
