#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include "sailforge/exact/vec.hpp"

namespace sailforge {

/// Supporting plane {x : normal . x = offset}; the body lies in normal . x <= offset.
struct Plane {
  IntVec3 normal;  // primitive
  Int offset;

  Int eval(const IntVec3& x) const { return dot(normal, x) - offset; }
  friend bool operator==(const Plane& a, const Plane& b) { return a.normal == b.normal && a.offset == b.offset; }
  friend bool operator<(const Plane& a, const Plane& b) {
    if (a.normal != b.normal) return a.normal < b.normal;
    return a.offset < b.offset;
  }
};

/// Exact polyhedral surface with planar convex faces.
struct PolyMesh {
  std::vector<IntVec3> vertices;
  std::vector<std::vector<std::size_t>> faces;  // vertex-index cycles, outward orientation
  std::vector<Plane> planes;                    // one per face

  std::vector<IntVec3> face_points(std::size_t f) const {
    std::vector<IntVec3> pts;
    for (auto i : faces[f]) pts.push_back(vertices[i]);
    return pts;
  }

  /// Index of the face with exactly these vertices (any order), or -1.
  long find_face(std::vector<IntVec3> pts) const {
    std::sort(pts.begin(), pts.end());
    for (std::size_t f = 0; f < faces.size(); ++f) {
      auto fp = face_points(f);
      std::sort(fp.begin(), fp.end());
      if (fp == pts) return static_cast<long>(f);
    }
    return -1;
  }
};

/// Input points do not span R^3.
class DegenerateHull : public DomainError {
 public:
  explicit DegenerateHull(int rank)
      : DomainError("point set is degenerate: affine rank " + std::to_string(rank) + " < 3"), rank_(rank) {}
  int rank() const { return rank_; }

 private:
  int rank_;
};

namespace detail {

inline Int cross2(const Int& ax, const Int& ay, const Int& bx, const Int& by) { return ax * by - ay * bx; }

/// Strict convex hull of coplanar points, counter-clockwise as seen from the tip of `normal`.
inline std::vector<IntVec3> planar_hull(std::vector<IntVec3> pts, const IntVec3& normal) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::size_t k = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (abs(normal[i]) > abs(normal[k])) k = i;
  const std::size_t u = (k + 1) % 3, v = (k + 2) % 3;
  // monotone chain in the (u, v) projection, which is counter-clockwise around +e_k
  auto key_less = [&](const IntVec3& a, const IntVec3& b) {
    if (a[u] != b[u]) return a[u] < b[u];
    return a[v] < b[v];
  };
  std::sort(pts.begin(), pts.end(), key_less);
  auto turn = [&](const IntVec3& o, const IntVec3& a, const IntVec3& b) {
    count_ops(3);
    return cross2(a[u] - o[u], a[v] - o[v], b[u] - o[u], b[v] - o[v]);
  };
  std::vector<IntVec3> h(2 * pts.size());
  std::size_t n = 0;
  for (const auto& p : pts) {
    while (n >= 2 && turn(h[n - 2], h[n - 1], p) <= 0) --n;
    h[n++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = n + 1; i-- > 0;) {
    while (n >= t && turn(h[n - 2], h[n - 1], pts[i]) <= 0) --n;
    h[n++] = pts[i];
  }
  h.resize(n - 1);
  if (normal[k] < 0) std::reverse(h.begin(), h.end());
  return h;
}

/// Rotates a cycle so that its lexicographically smallest point comes first.
template <class T>
void rotate_to_min(std::vector<T>& cycle) {
  auto it = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), it, cycle.end());
}

inline Plane make_plane(IntVec3 n, const IntVec3& on, const IntVec3& inside_hint) {
  n = primitive(n);
  Int off = dot(n, on);
  if (dot(n, inside_hint) > off) {
    n = -n;
    off = -off;
  }
  return {n, off};
}

}  // namespace detail

/// Affine rank of a point set (0..3).
inline int affine_rank(const std::vector<IntVec3>& pts) {
  if (pts.empty()) return -1;
  const IntVec3& p0 = pts[0];
  std::size_t i1 = 0;
  for (std::size_t i = 1; i < pts.size() && !i1; ++i)
    if (pts[i] != p0) i1 = i;
  if (!i1) return 0;
  std::size_t i2 = 0;
  for (std::size_t i = 1; i < pts.size() && !i2; ++i)
    if (!cross(pts[i1] - p0, pts[i] - p0).is_zero()) i2 = i;
  if (!i2) return 1;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (det3(pts[i1] - p0, pts[i2] - p0, pts[i] - p0) != 0) return 3;
  return 2;
}

/// Exact convex hull with coplanar facets merged into maximal convex polygons.
/// Vertices are sorted lexicographically; every face cycle starts at its smallest vertex
/// and runs counter-clockwise seen from outside.
inline PolyMesh hull3d(std::vector<IntVec3> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const int rank = affine_rank(points);
  if (rank < 3) throw DegenerateHull(std::max(rank, 0));

  // interior reference: 4 * centroid of an affinely independent quadruple
  IntVec3 interior4;
  {
    const IntVec3& p0 = points[0];
    std::size_t i1 = 1, i2 = 0, i3 = 0;
    for (std::size_t i = 2; i < points.size() && !i2; ++i)
      if (!cross(points[i1] - p0, points[i] - p0).is_zero()) i2 = i;
    for (std::size_t i = 2; i < points.size() && !i3; ++i)
      if (det3(points[i1] - p0, points[i2] - p0, points[i] - p0) != 0) i3 = i;
    interior4 = p0 + points[i1] + points[i2] + points[i3];
  }
  auto orient_out = [&](IntVec3 n, const IntVec3& on) {
    n = primitive(n);
    Int off = dot(n, on);
    if (dot(n, interior4) > 4 * off) {
      n = -n;
      off = -off;
    }
    return Plane{n, off};
  };

  std::map<Plane, std::vector<IntVec3>> facets;
  std::deque<Plane> queue;
  std::set<std::pair<IntVec3, IntVec3>> directed_edges;

  auto add_facet = [&](const Plane& pl) {
    if (facets.count(pl)) return;
    std::vector<IntVec3> on;
    for (const auto& p : points)
      if (pl.eval(p) == 0) on.push_back(p);
    auto poly = detail::planar_hull(on, pl.normal);
    for (std::size_t i = 0; i < poly.size(); ++i) directed_edges.insert({poly[i], poly[(i + 1) % poly.size()]});
    facets.emplace(pl, std::move(poly));
    queue.push_back(pl);
  };

  // Rotate around edge (u, v) of a supporting plane `from` to the adjacent facet.
  auto wrap = [&](const IntVec3& u, const IntVec3& v, const Plane& from) {
    const IntVec3 t = cross(from.normal, v - u);
    const IntVec3* best = nullptr;
    Int best_a, best_b;
    for (const auto& r : points) {
      Int beta = -dot(from.normal, r - u);
      if (beta == 0) continue;  // lies in the plane we rotate away from
      Int alpha = dot(t, r - u);
      if (!best || detail::cross2(best_a, best_b, alpha, beta) > 0) {
        best = &r;
        best_a = alpha;
        best_b = beta;
      }
    }
    return orient_out(cross(v - u, *best - u), u);
  };

  // initial supporting plane: vertical plane through a 2D hull edge of the xy-projection
  {
    const IntVec3& p = points[0];
    const IntVec3* q = nullptr;
    for (const auto& r : points) {
      if (r[0] == p[0] && r[1] == p[1]) continue;
      if (!q || detail::cross2((*q)[0] - p[0], (*q)[1] - p[1], r[0] - p[0], r[1] - p[1]) < 0) q = &r;
    }
    IntVec3 n0((*q)[1] - p[1], p[0] - (*q)[0], 0);
    Plane vertical = orient_out(n0, p);
    std::vector<IntVec3> on;
    for (const auto& r : points)
      if (vertical.eval(r) == 0) on.push_back(r);
    if (affine_rank(on) == 2) {
      add_facet(vertical);
    } else {
      auto [mn, mx] = std::minmax_element(on.begin(), on.end());
      add_facet(wrap(*mn, *mx, vertical));
    }
  }

  while (!queue.empty()) {
    Plane pl = queue.front();
    queue.pop_front();
    const auto poly = facets.at(pl);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const IntVec3& a = poly[i];
      const IntVec3& b = poly[(i + 1) % poly.size()];
      if (directed_edges.count({b, a})) continue;
      add_facet(wrap(a, b, pl));
    }
  }

  PolyMesh mesh;
  std::set<IntVec3> vset;
  for (const auto& [pl, poly] : facets) vset.insert(poly.begin(), poly.end());
  mesh.vertices.assign(vset.begin(), vset.end());
  auto index_of = [&](const IntVec3& v) {
    return static_cast<std::size_t>(std::lower_bound(mesh.vertices.begin(), mesh.vertices.end(), v) - mesh.vertices.begin());
  };
  std::vector<std::pair<std::vector<std::size_t>, Plane>> faces;
  for (const auto& [pl, poly] : facets) {
    std::vector<std::size_t> cyc;
    for (const auto& v : poly) cyc.push_back(index_of(v));
    detail::rotate_to_min(cyc);
    faces.emplace_back(std::move(cyc), pl);
  }
  std::sort(faces.begin(), faces.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (auto& [cyc, pl] : faces) {
    mesh.faces.push_back(std::move(cyc));
    mesh.planes.push_back(pl);
  }
  return mesh;
}

}  // namespace sailforge
