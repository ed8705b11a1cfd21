#pragma once

#include <variant>
#include <vector>

#include "anisofreq/linalg.hpp"

namespace anisofreq {

struct Disk {
  Vec2 center;
  double radius = 1.0;
};

/// Axis-aligned rectangle [-halfwidth, halfwidth] x [-halfheight, halfheight].
struct Rectangle {
  double halfwidth = 1.0;
  double halfheight = 1.0;
};

/// Simple polygon, counterclockwise.
struct Polygon {
  std::vector<Vec2> vertices;
};

/// Image {center + map w : |w| <= 1} of the unit disk under an
/// orientation-preserving linear map. Produced by rotating and shearing disks.
struct Ellipse {
  Vec2 center;
  Mat2 map;

  Vec2 point(double t) const;
};

using DomainSpec = std::variant<Disk, Rectangle, Polygon, Ellipse>;

/// Throws Error(InvalidArgument) on a degenerate or self-intersecting domain.
void validate(const DomainSpec& d);
void validate(const Polygon& p);

/// Omega_A = R_theta^T(Omega), theta in [0, pi/2].
DomainSpec rotate(const DomainSpec& d, double theta);

/// Omega^a = {(x, sqrt(a) y)}, a in (0, 1].
DomainSpec shear_y(const DomainSpec& d, double a);

double area(const DomainSpec& d);
double signed_area(const std::vector<Vec2>& vertices);

bool is_curved(const DomainSpec& d);

/// Inscribed polygon with n_boundary vertices for curved domains; polygons and
/// rectangles pass through unchanged. Requires n_boundary >= 16.
Polygon polygonize(const DomainSpec& d, int n_boundary);

/// Boundary parametrization of a curved domain as an ellipse (disks included).
Ellipse as_ellipse(const DomainSpec& d);

/// Base domain together with the rotation and shear applied to it.
struct TransformedDomain {
  DomainSpec base;
  double rotation_theta = 0.0;
  double shear_a = 1.0;

  DomainSpec realize() const { return shear_y(rotate(base, rotation_theta), shear_a); }
};

namespace domains {
/// [-1, 1]^2
inline DomainSpec square() { return Rectangle{1.0, 1.0}; }
inline DomainSpec unit_disk() { return Disk{{0.0, 0.0}, 1.0}; }
/// [-1, 1]^2 with the quadrant (0, 1)^2 removed.
DomainSpec l_shape();
/// R_a = [-1, 1] x [-1/sqrt(a), 1/sqrt(a)].
DomainSpec rectangle_ra(double a);
}  // namespace domains

}  // namespace anisofreq
