#include "anisofreq/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "anisofreq/error.hpp"
#include "anisofreq/serialize.hpp"

namespace anisofreq {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (hi << 32) | lo;
}

std::unordered_map<std::uint64_t, int> edge_counts(const std::vector<Mesh::Triangle>& tris) {
  std::unordered_map<std::uint64_t, int> counts;
  counts.reserve(tris.size() * 2);
  for (const auto& t : tris)
    for (int k = 0; k < 3; ++k) ++counts[edge_key(t[k], t[(k + 1) % 3])];
  return counts;
}

double triangle_min_angle(Vec2 a, Vec2 b, Vec2 c) {
  auto angle = [](Vec2 at, Vec2 u, Vec2 v) {
    const Vec2 e1 = u - at, e2 = v - at;
    return std::atan2(std::abs(cross(e1, e2)), dot(e1, e2));
  };
  return std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)});
}

bool in_closed_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
  return cross(b - a, p - a) >= 0.0 && cross(c - b, p - b) >= 0.0 && cross(a - c, p - c) >= 0.0;
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> nodes, std::vector<Triangle> triangles, std::optional<Ellipse> curve,
           std::vector<double> boundary_param)
    : nodes_(std::move(nodes)),
      triangles_(std::move(triangles)),
      curve_(std::move(curve)),
      boundary_param_(std::move(boundary_param)) {
  require(!triangles_.empty(), "mesh has no triangles", ErrorCode::Mesh);
  if (boundary_param_.empty()) boundary_param_.assign(nodes_.size(), std::numeric_limits<double>::quiet_NaN());
  require(boundary_param_.size() == nodes_.size(), "boundary parameter size mismatch", ErrorCode::Mesh);

  tri_area_.resize(triangles_.size());
  grad_map_.resize(triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int k : tri) require(k >= 0 && static_cast<std::size_t>(k) < nodes_.size(), "triangle index out of range",
                              ErrorCode::Mesh);
    const Vec2 p0 = nodes_[tri[0]], p1 = nodes_[tri[1]], p2 = nodes_[tri[2]];
    const double twice = cross(p1 - p0, p2 - p0);
    require(twice > 0.0, "triangle with nonpositive area (clockwise or degenerate)", ErrorCode::Mesh);
    tri_area_[t] = 0.5 * twice;
    const double inv = 1.0 / twice;
    grad_map_[t] = {Vec2{(p1.y - p2.y) * inv, (p2.x - p1.x) * inv}, Vec2{(p2.y - p0.y) * inv, (p0.x - p2.x) * inv},
                    Vec2{(p0.y - p1.y) * inv, (p1.x - p0.x) * inv}};
  }

  boundary_.assign(nodes_.size(), 0);
  for (const auto& [key, count] : edge_counts(triangles_)) {
    require(count <= 2, "nonconforming mesh: edge shared by more than two triangles", ErrorCode::Mesh);
    if (count == 1) {
      boundary_[key & 0xffffffffu] = 1;
      boundary_[key >> 32] = 1;
    }
  }
}

Vec2 Mesh::gradient(std::size_t t, const std::vector<double>& nodal) const {
  const auto& tri = triangles_[t];
  const auto& g = grad_map_[t];
  Vec2 out;
  for (int k = 0; k < 3; ++k) out = out + nodal[tri[k]] * g[k];
  return out;
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (double a : tri_area_) sum += a;
  return sum;
}

std::size_t Mesh::boundary_node_count() const {
  return static_cast<std::size_t>(std::count(boundary_.begin(), boundary_.end(), 1));
}

double Mesh::min_angle() const {
  double out = std::numbers::pi;
  for (const auto& t : triangles_) out = std::min(out, triangle_min_angle(nodes_[t[0]], nodes_[t[1]], nodes_[t[2]]));
  return out;
}

Mesh triangulate(const Polygon& p) {
  validate(p);
  const auto& v = p.vertices;
  const int n = static_cast<int>(v.size());
  std::vector<int> prev(n), next(n);
  for (int i = 0; i < n; ++i) {
    prev[i] = (i + n - 1) % n;
    next[i] = (i + 1) % n;
  }
  std::vector<char> alive(n, 1);

  auto is_ear = [&](int i) {
    const int a = prev[i], c = next[i];
    if (cross(v[i] - v[a], v[c] - v[i]) <= 0.0) return false;
    for (int j = next[c]; j != a; j = next[j]) {
      // Only reflex vertices can sit inside a candidate ear.
      if (cross(v[j] - v[prev[j]], v[next[j]] - v[j]) > 0.0) continue;
      if (in_closed_triangle(v[j], v[a], v[i], v[c]) && !(v[j] == v[a]) && !(v[j] == v[i]) && !(v[j] == v[c]))
        return false;
    }
    return true;
  };
  auto quality = [&](int i) { return is_ear(i) ? triangle_min_angle(v[prev[i]], v[i], v[next[i]]) : -1.0; };

  std::vector<double> q(n);
  for (int i = 0; i < n; ++i) q[i] = quality(i);

  std::vector<Mesh::Triangle> tris;
  tris.reserve(n - 2);
  for (int remaining = n; remaining > 3; --remaining) {
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (!alive[i] || q[i] < 0.0) continue;
      if (best < 0 || q[i] > q[best] * (1.0 + 1e-9)) best = i;
    }
    require(best >= 0, "ear clipping found no ear; polygon is degenerate", ErrorCode::Mesh);
    const int a = prev[best], c = next[best];
    tris.push_back({a, best, c});
    alive[best] = 0;
    next[a] = c;
    prev[c] = a;
    q[a] = quality(a);
    q[c] = quality(c);
  }
  for (int i = 0; i < n; ++i) {
    if (alive[i]) {
      tris.push_back({prev[i], i, next[i]});
      break;
    }
  }
  return Mesh(v, std::move(tris));
}

Mesh refine(const Mesh& m, int levels) {
  require(levels >= 0, "refinement levels must be >= 0");
  if (levels == 0) return m;

  std::vector<Vec2> nodes = m.nodes();
  std::vector<double> params = m.boundary_param();
  const auto& curve = m.curve();
  const auto counts = edge_counts(m.triangles());

  std::unordered_map<std::uint64_t, int> midpoint;
  midpoint.reserve(counts.size());
  auto mid = [&](int a, int b) {
    const auto key = edge_key(a, b);
    if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
    Vec2 pos = 0.5 * (nodes[a] + nodes[b]);
    double t = std::numeric_limits<double>::quiet_NaN();
    if (curve && counts.at(key) == 1 && std::isfinite(params[a]) && std::isfinite(params[b])) {
      double ta = params[a], tb = params[b];
      if (std::abs(tb - ta) > std::numbers::pi) (ta < tb ? ta : tb) += 2.0 * std::numbers::pi;
      t = std::fmod(0.5 * (ta + tb), 2.0 * std::numbers::pi);
      pos = curve->point(t);
    }
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(pos);
    params.push_back(t);
    midpoint.emplace(key, id);
    return id;
  };

  std::vector<Mesh::Triangle> tris;
  tris.reserve(m.triangle_count() * 4);
  for (const auto& t : m.triangles()) {
    const int a = t[0], b = t[1], c = t[2];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    tris.push_back({a, ab, ca});
    tris.push_back({ab, b, bc});
    tris.push_back({ca, bc, c});
    tris.push_back({ab, bc, ca});
  }
  Mesh out(std::move(nodes), std::move(tris), curve, std::move(params));
  return refine(out, levels - 1);
}

Mesh build_mesh(const DomainSpec& d, const MeshOptions& opts) {
  require(opts.level >= 0, "mesh level must be >= 0");
  validate(d);
  if (!is_curved(d)) return refine(triangulate(polygonize(d, 16)), opts.level);

  const Ellipse e = as_ellipse(d);
  const Polygon coarse = polygonize(d, opts.coarse_boundary);
  std::vector<double> params(coarse.vertices.size());
  for (std::size_t k = 0; k < params.size(); ++k) params[k] = 2.0 * std::numbers::pi * k / params.size();
  const Mesh base = triangulate(coarse);
  return refine(Mesh(base.nodes(), base.triangles(), e, std::move(params)), opts.level);
}

DofMap interior_dof_map(const Mesh& m) {
  DofMap map;
  map.node_to_dof.assign(m.node_count(), -1);
  for (std::size_t i = 0; i < m.node_count(); ++i) {
    if (m.is_boundary(i)) continue;
    map.node_to_dof[i] = static_cast<int>(map.dof_to_node.size());
    map.dof_to_node.push_back(static_cast<int>(i));
  }
  require(!map.dof_to_node.empty(), "mesh has no interior nodes; refine further", ErrorCode::Mesh);
  return map;
}

std::string nodes_csv(const Mesh& m) {
  std::ostringstream out;
  out << "id,x,y,boundary\n";
  for (std::size_t i = 0; i < m.node_count(); ++i)
    out << i << ',' << format_number(m.nodes()[i].x) << ',' << format_number(m.nodes()[i].y) << ','
        << (m.is_boundary(i) ? 1 : 0) << '\n';
  return out.str();
}

std::string triangles_csv(const Mesh& m) {
  std::ostringstream out;
  out << "id,n0,n1,n2\n";
  for (std::size_t t = 0; t < m.triangle_count(); ++t) {
    const auto& tri = m.triangles()[t];
    out << t << ',' << tri[0] << ',' << tri[1] << ',' << tri[2] << '\n';
  }
  return out.str();
}

}  // namespace anisofreq
