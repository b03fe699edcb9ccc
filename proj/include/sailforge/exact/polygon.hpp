#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sailforge/exact/lattice.hpp"
#include "sailforge/exact/vec.hpp"

namespace sailforge {

inline RatVec3 operator+(const RatVec3& a, const RatVec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline RatVec3 operator-(const RatVec3& a, const RatVec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline RatVec3 operator*(const Rat& k, const RatVec3& a) { return {k * a[0], k * a[1], k * a[2]}; }
inline Rat dot(const RatVec3& a, const RatVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline RatVec3 cross(const RatVec3& u, const RatVec3& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

inline std::string to_string(const RatVec3& v) {
  return "(" + to_string(v[0]) + "," + to_string(v[1]) + "," + to_string(v[2]) + ")";
}

/// Planar convex polygon with the normal induced by its cycle.
struct ConvexPolygon {
  std::vector<IntVec3> pts;
  IntVec3 normal;
  Int offset;

  explicit ConvexPolygon(std::vector<IntVec3> p) : pts(std::move(p)) {
    normal = cross(pts[1] - pts[0], pts[2] - pts[1]);
    offset = dot(normal, pts[0]);
  }

  std::size_t size() const { return pts.size(); }
  const IntVec3& operator[](std::size_t i) const { return pts[i % pts.size()]; }

  /// Closed containment for a point of the polygon's plane.
  bool contains_coplanar(const RatVec3& x) const {
    for (std::size_t i = 0; i < size(); ++i) {
      RatVec3 a = to_rat((*this)[i]), b = to_rat((*this)[i + 1]);
      count_ops(12);
      if (dot(cross(b - a, x - a), to_rat(normal)) < 0) return false;
    }
    return true;
  }

  bool contains(const RatVec3& x) const { return dot(normal, x) == Rat(offset) && contains_coplanar(x); }

  bool has_edge(const IntVec3& u, const IntVec3& v) const {
    for (std::size_t i = 0; i < size(); ++i) {
      const auto& a = (*this)[i];
      const auto& b = (*this)[i + 1];
      if ((a == u && b == v) || (a == v && b == u)) return true;
    }
    return false;
  }
};

namespace detail {

inline bool on_segment(const RatVec3& x, const RatVec3& a, const RatVec3& b) {
  RatVec3 d = b - a, e = x - a;
  RatVec3 c = cross(d, e);
  if (c[0] != 0 || c[1] != 0 || c[2] != 0) return false;
  Rat t = dot(e, d);
  return t >= 0 && t <= dot(d, d);
}

/// Points whose convex hull is the intersection of two closed convex polygons.
inline std::vector<RatVec3> intersection_witnesses(const ConvexPolygon& p, const ConvexPolygon& q) {
  std::vector<RatVec3> out;
  IntVec3 d = cross(p.normal, q.normal);
  if (!d.is_zero()) {
    std::vector<std::vector<Rat>> m{{Rat(p.normal[0]), Rat(p.normal[1]), Rat(p.normal[2])},
                                    {Rat(q.normal[0]), Rat(q.normal[1]), Rat(q.normal[2])},
                                    {Rat(d[0]), Rat(d[1]), Rat(d[2])}};
    RatVec3 p0;
    {
      auto s = *solve_rational(m, {Rat(p.offset), Rat(q.offset), Rat(0)});
      p0 = {s[0], s[1], s[2]};
    }
    RatVec3 dr = to_rat(d);
    std::optional<Rat> lo, hi;
    bool empty = false;
    auto clip = [&](const ConvexPolygon& poly) {
      RatVec3 n = to_rat(poly.normal);
      for (std::size_t i = 0; i < poly.size() && !empty; ++i) {
        RatVec3 a = to_rat(poly[i]), b = to_rat(poly[i + 1]);
        count_ops(24);
        Rat alpha = dot(cross(b - a, p0 - a), n);
        Rat beta = dot(cross(b - a, dr), n);
        if (beta == 0) {
          if (alpha < 0) empty = true;
        } else if (beta > 0) {
          Rat t = -alpha / beta;
          if (!lo || t > *lo) lo = t;
        } else {
          Rat t = -alpha / beta;
          if (!hi || t < *hi) hi = t;
        }
      }
    };
    clip(p);
    clip(q);
    if (empty || !lo || !hi || *lo > *hi) return out;
    out.push_back(p0 + *lo * dr);
    if (*hi != *lo) out.push_back(p0 + *hi * dr);
    return out;
  }
  // parallel planes: coplanar or disjoint
  if (dot(p.normal, q.pts[0]) != p.offset) return out;
  for (const auto& v : p.pts)
    if (q.contains_coplanar(to_rat(v))) out.push_back(to_rat(v));
  for (const auto& v : q.pts)
    if (p.contains_coplanar(to_rat(v))) out.push_back(to_rat(v));
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) {
      RatVec3 a = to_rat(p[i]), b = to_rat(p[i + 1]), c = to_rat(q[j]), e = to_rat(q[j + 1]);
      RatVec3 u = b - a, v = e - c, w = c - a;
      RatVec3 uv = cross(u, v);
      Rat den = dot(uv, uv);
      count_ops(30);
      if (den == 0) continue;  // parallel edges; overlaps show up as contained vertices
      Rat s = dot(cross(w, v), uv) / den;
      Rat t = dot(cross(w, u), uv) / den;
      if (s >= 0 && s <= 1 && t >= 0 && t <= 1) out.push_back(a + s * u);
    }
  return out;
}

}  // namespace detail

/// Checks that two closed convex polygons meet properly: not at all, in one shared vertex, or
/// along a shared edge. Returns a description of the violation otherwise.
inline std::optional<std::string> improper_meeting(const ConvexPolygon& p, const ConvexPolygon& q) {
  std::vector<IntVec3> shared;
  for (const auto& v : p.pts)
    for (const auto& w : q.pts)
      if (v == w) shared.push_back(v);
  auto wit = detail::intersection_witnesses(p, q);
  if (wit.empty()) return std::nullopt;
  if (shared.empty()) return "polygons intersect at " + to_string(wit.front()) + " without sharing a vertex";
  if (shared.size() > 2) return "polygons share " + std::to_string(shared.size()) + " vertices";
  if (shared.size() == 1) {
    for (const auto& x : wit)
      if (x != to_rat(shared[0]))
        return "polygons sharing vertex " + to_string(shared[0]) + " also meet at " + to_string(x);
    return std::nullopt;
  }
  if (!p.has_edge(shared[0], shared[1]) || !q.has_edge(shared[0], shared[1]))
    return "shared vertices " + to_string(shared[0]) + ", " + to_string(shared[1]) + " do not form a common edge";
  for (const auto& x : wit)
    if (!detail::on_segment(x, to_rat(shared[0]), to_rat(shared[1])))
      return "polygons sharing edge " + to_string(shared[0]) + "-" + to_string(shared[1]) + " also meet at " +
             to_string(x);
  return std::nullopt;
}

}  // namespace sailforge
