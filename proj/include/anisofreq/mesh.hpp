#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "anisofreq/geometry.hpp"

namespace anisofreq {

/// Conforming P1 triangulation. Immutable once built; per-triangle areas and
/// basis gradients are precomputed so every gradient is a 3-term sum.
class Mesh {
 public:
  using Triangle = std::array<int, 3>;

  /// Validates orientation/positivity and derives boundary flags from the
  /// topology (a node is on the boundary iff it lies on an edge owned by a
  /// single triangle). `curve` and `boundary_param` let refinement place
  /// boundary midpoints on a curved boundary.
  Mesh(std::vector<Vec2> nodes, std::vector<Triangle> triangles, std::optional<Ellipse> curve = std::nullopt,
       std::vector<double> boundary_param = {});

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }

  const std::vector<Vec2>& nodes() const { return nodes_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  bool is_boundary(std::size_t node) const { return boundary_[node] != 0; }
  double tri_area(std::size_t t) const { return tri_area_[t]; }
  /// Gradients of the three barycentric basis functions on triangle t;
  /// grad u = sum_k u[tri[k]] * grad_map(t)[k].
  const std::array<Vec2, 3>& grad_map(std::size_t t) const { return grad_map_[t]; }

  Vec2 gradient(std::size_t t, const std::vector<double>& nodal) const;

  const std::optional<Ellipse>& curve() const { return curve_; }
  const std::vector<double>& boundary_param() const { return boundary_param_; }

  double total_area() const;
  std::size_t boundary_node_count() const;
  /// Smallest interior angle over all triangles, radians.
  double min_angle() const;

 private:
  std::vector<Vec2> nodes_;
  std::vector<Triangle> triangles_;
  std::vector<char> boundary_;
  std::vector<double> tri_area_;
  std::vector<std::array<Vec2, 3>> grad_map_;
  std::optional<Ellipse> curve_;
  std::vector<double> boundary_param_;
};

/// Ear clipping; at each step the ear with the largest minimum angle is cut
/// (ties go to the lowest vertex index), so the result is invariant under
/// rotations of the input.
Mesh triangulate(const Polygon& p);

/// Uniform red refinement: every triangle is split into four through its edge
/// midpoints, `levels` times.
Mesh refine(const Mesh& m, int levels);

struct MeshOptions {
  int level = 5;
  /// Vertices of the coarse inscribed polygon for curved domains. The final
  /// boundary has coarse_boundary * 2^level vertices on the curve.
  int coarse_boundary = 16;
};

Mesh build_mesh(const DomainSpec& d, const MeshOptions& opts);

/// Dense numbering of the interior (free) nodes.
struct DofMap {
  std::vector<int> node_to_dof;  // -1 on boundary nodes
  std::vector<int> dof_to_node;

  std::size_t size() const { return dof_to_node.size(); }
};

/// Throws Error(Mesh) when the mesh has no interior node.
DofMap interior_dof_map(const Mesh& m);

std::string nodes_csv(const Mesh& m);
std::string triangles_csv(const Mesh& m);

}  // namespace anisofreq
