#pragma once

#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sailforge/candidate.hpp"
#include "sailforge/commutant.hpp"
#include "sailforge/exact/hull.hpp"
#include "sailforge/exact/interval.hpp"
#include "sailforge/exact/lattice.hpp"
#include "sailforge/units.hpp"

namespace sailforge {

using PolyVec3 = std::array<IntPoly, 3>;

/// Eigenvalues of A with exact left and right eigenvector forms (entries of adj(lambda E - A)).
struct EigenData {
  IntMat3 a;
  IntPoly chi;
  std::array<RootInterval, 3> roots;
  std::array<PolyVec3, 3> left;   // left[i](lambda_i) A = lambda_i left[i](lambda_i)
  std::array<PolyVec3, 3> right;  // A right[i](lambda_i) = lambda_i right[i](lambda_i)
  std::array<int, 3> pairing{};   // sign of <left[i], right[i]> at lambda_i
};

using SignVector = std::array<int, 3>;

inline std::string to_string(const SignVector& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < 3; ++i) out += (i ? "," : "") + std::string(s[i] > 0 ? "+" : s[i] < 0 ? "-" : "0");
  return out + ")";
}

struct OrthantRef {
  SignVector signs;
  IntVec3 witness;
};

namespace detail {

inline IntPoly dot(const PolyVec3& f, const IntVec3& x) {
  return IntPoly::constant(x[0]) * f[0] + IntPoly::constant(x[1]) * f[1] + IntPoly::constant(x[2]) * f[2];
}

inline IntPoly dot(const PolyVec3& f, const PolyVec3& g) { return f[0] * g[0] + f[1] * g[1] + f[2] * g[2]; }

/// adj(lambda E - A) as a matrix of polynomials in lambda.
inline std::array<std::array<IntPoly, 3>, 3> char_adjugate(const IntMat3& a) {
  std::array<std::array<IntPoly, 3>, 3> m;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      m[i][j] = i == j ? IntPoly(std::vector<Int>{Int(-a(i, j)), Int(1)}) : IntPoly::constant(-a(i, j));
  std::array<std::array<IntPoly, 3>, 3> adj;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      std::size_t r0 = (r + 1) % 3, r1 = (r + 2) % 3, c0 = (c + 1) % 3, c1 = (c + 2) % 3;
      adj[c][r] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    }
  return adj;
}

inline std::array<RatInterval, 3> eval(const PolyVec3& f, const RatInterval& x) {
  return {sailforge::eval(f[0], x), sailforge::eval(f[1], x), sailforge::eval(f[2], x)};
}

inline std::array<double, 3> approx(const PolyVec3& f, double x) {
  std::array<double, 3> out{};
  for (std::size_t k = 0; k < 3; ++k) {
    double acc = 0;
    const auto& c = f[k].coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + to_double(*it);
    out[k] = acc;
  }
  return out;
}

}  // namespace detail

inline EigenData eigen_data(const IntMat3& a) {
  require_irreducible_hyperbolic(a);
  EigenData e;
  e.a = a;
  e.chi = char_poly(a);
  auto roots = isolate_real_roots(e.chi);
  auto adj = detail::char_adjugate(a);
  for (std::size_t i = 0; i < 3; ++i) {
    e.roots[i] = roots[i];
    bool got_left = false, got_right = false;
    for (std::size_t r = 0; r < 3 && !got_left; ++r) {
      PolyVec3 row{adj[r][0], adj[r][1], adj[r][2]};
      for (const auto& p : row)
        if (sign_at(p, roots[i]) != 0) got_left = true;
      if (got_left) e.left[i] = row;
    }
    for (std::size_t c = 0; c < 3 && !got_right; ++c) {
      PolyVec3 col{adj[0][c], adj[1][c], adj[2][c]};
      for (const auto& p : col)
        if (sign_at(p, roots[i]) != 0) got_right = true;
      if (got_right) e.right[i] = col;
    }
    if (!got_left || !got_right) throw DomainError("eigenvector forms vanish at an eigenvalue");
    e.pairing[i] = sign_at(detail::dot(e.left[i], e.right[i]), roots[i]);
  }
  return e;
}

/// Signs of the three left-eigenform values at x; a zero means x lies on an eigenplane.
inline SignVector orthant_sign_vector(const EigenData& e, const IntVec3& x) {
  SignVector s{};
  for (std::size_t i = 0; i < 3; ++i) s[i] = sign_at(detail::dot(e.left[i], x), e.roots[i]);
  return s;
}

inline OrthantRef orthant_of(const EigenData& e, const IntVec3& x) {
  auto s = orthant_sign_vector(e, x);
  for (int v : s)
    if (v == 0) throw DomainError("point " + to_string(x) + " lies on an eigenplane");
  return {s, x};
}

/// True iff det(x, Bx, B^2 x) has no zero on the segment from x2 to x1.
inline bool same_orthant_cubic(const IntMat3& b, const IntVec3& x1, const IntVec3& x2) {
  // x(t) = x2 + t (x1 - x2), coordinates as linear polynomials in t
  PolyVec3 x;
  IntVec3 d = x1 - x2;
  for (std::size_t k = 0; k < 3; ++k) x[k] = IntPoly(std::vector<Int>{x2[k], d[k]});
  auto apply = [&](const PolyVec3& v) {
    PolyVec3 r;
    for (std::size_t i = 0; i < 3; ++i)
      r[i] = IntPoly::constant(b(i, 0)) * v[0] + IntPoly::constant(b(i, 1)) * v[1] + IntPoly::constant(b(i, 2)) * v[2];
    return r;
  };
  PolyVec3 bx = apply(x), bbx = apply(bx);
  IntPoly f = x[0] * (bx[1] * bbx[2] - bx[2] * bbx[1]) - x[1] * (bx[0] * bbx[2] - bx[2] * bbx[0]) +
              x[2] * (bx[0] * bbx[1] - bx[1] * bbx[0]);
  count_ops(30);
  if (f.is_zero()) return false;
  return cubic_roots_in_unit_segment(f) == 0;
}

/// An integer point of the open orthant with the given signs.
inline IntVec3 find_orthant_point(const EigenData& e, const SignVector& signs) {
  for (int s : signs)
    if (s == 0) throw DomainError("orthant signs must be nonzero");
  std::array<double, 3> dir{};
  for (std::size_t i = 0; i < 3; ++i) {
    RootInterval r = e.roots[i];
    r.refine_to(Rat(1, Int(1) << 60));
    double lam = r.approx();
    auto v = detail::approx(e.right[i], lam);
    auto l = detail::approx(e.left[i], lam);
    double lv = l[0] * v[0] + l[1] * v[1] + l[2] * v[2];
    double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    for (std::size_t k = 0; k < 3; ++k) dir[k] += signs[i] * v[k] / norm * (lv > 0 ? 1.0 : -1.0);
  }
  for (int step = 0; step < 120; ++step) {
    double scale = std::ldexp(1.0, step);
    for (int mask = 0; mask < 8; ++mask) {
      IntVec3 p;
      for (std::size_t k = 0; k < 3; ++k) {
        double v = dir[k] * scale;
        p[k] = Int(static_cast<long long>((mask >> k) & 1 ? std::ceil(v) : std::floor(v)));
      }
      if (p.is_zero()) continue;
      if (orthant_sign_vector(e, p) == signs) return p;
    }
  }
  throw DomainError("no integer point found in orthant " + to_string(signs));
}

inline IntVec3 find_orthant_point(const EigenData& e, const OrthantRef& ref) { return find_orthant_point(e, ref.signs); }

namespace detail {

/// tau_j such that tau_j right[j] is the extreme ray of the closed orthant on eigenline j.
inline std::array<int, 3> ray_signs(const EigenData& e, const SignVector& signs) {
  return {signs[0] * e.pairing[0], signs[1] * e.pairing[1], signs[2] * e.pairing[2]};
}

inline bool positive_on_rays(const EigenData& e, const SignVector& signs, const IntVec3& w) {
  auto tau = ray_signs(e, signs);
  for (std::size_t j = 0; j < 3; ++j)
    if (sign_at(dot(e.right[j], w), e.roots[j]) != tau[j]) return false;
  return true;
}

}  // namespace detail

/// Integer covector positive on all three extreme rays of the orthant, small ones first.
inline IntVec3 find_slice_normal(const EigenData& e, const SignVector& signs) {
  std::vector<IntVec3> cands;
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y)
      for (int z = -3; z <= 3; ++z)
        if (x || y || z) cands.emplace_back(x, y, z);
  std::stable_sort(cands.begin(), cands.end(), [](const IntVec3& p, const IntVec3& q) {
    return abs(p[0]) + abs(p[1]) + abs(p[2]) < abs(q[0]) + abs(q[1]) + abs(q[2]);
  });
  for (const auto& w : cands)
    if (detail::positive_on_rays(e, signs, w)) return primitive(w);
  // sum of normalized left forms, signed toward the orthant
  std::array<double, 3> dir{};
  for (std::size_t i = 0; i < 3; ++i) {
    RootInterval r = e.roots[i];
    r.refine_to(Rat(1, Int(1) << 60));
    auto l = detail::approx(e.left[i], r.approx());
    double norm = std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
    for (std::size_t k = 0; k < 3; ++k) dir[k] += signs[i] * l[k] / norm;
  }
  for (int step = 0; step < 60; ++step) {
    double scale = std::ldexp(1.0, step);
    IntVec3 w(Int(std::llround(dir[0] * scale)), Int(std::llround(dir[1] * scale)), Int(std::llround(dir[2] * scale)));
    if (!w.is_zero() && detail::positive_on_rays(e, signs, w)) return primitive(w);
  }
  throw DomainError("no slice normal found for orthant " + to_string(signs));
}

/// Integer points x of the closed orthant with <w, x> = k.
inline std::vector<IntVec3> orthant_slice(const EigenData& e, const SignVector& signs, const IntVec3& w, const Int& k) {
  auto tau = detail::ray_signs(e, signs);
  std::array<std::array<RatInterval, 3>, 3> corner;
  for (std::size_t j = 0; j < 3; ++j) {
    RootInterval r = e.roots[j];
    while (true) {
      auto v = detail::eval(e.right[j], RatInterval::of(r));
      for (auto& c : v) c = Rat(tau[j]) * c;
      RatInterval wv = Rat(w[0]) * v[0] + Rat(w[1]) * v[1] + Rat(w[2]) * v[2];
      if (wv.positive() && wv.width() * 1000 < wv.lo) {
        for (std::size_t c = 0; c < 3; ++c) corner[j][c] = Rat(k) * (v[c] / wv);
        bool tight = true;
        for (std::size_t c = 0; c < 3; ++c) tight = tight && corner[j][c].width() < 1;
        if (tight) break;
      }
      if (r.is_exact()) throw DomainError("eigenvalue unexpectedly rational");
      r.refine_to(r.width() / 1024);
    }
  }
  IntVec3 lo, hi;
  for (std::size_t c = 0; c < 3; ++c) {
    Rat mn = corner[0][c].lo, mx = corner[0][c].hi;
    for (std::size_t j = 1; j < 3; ++j) {
      mn = std::min(mn, corner[j][c].lo);
      mx = std::max(mx, corner[j][c].hi);
    }
    lo[c] = floor(mn);
    hi[c] = ceil(mx);
  }
  std::size_t solve = 0;
  for (std::size_t c = 1; c < 3; ++c)
    if (abs(w[c]) > abs(w[solve])) solve = c;
  const std::size_t u = (solve + 1) % 3, v = (solve + 2) % 3;
  std::vector<IntVec3> out;
  for (Int a = lo[u]; a <= hi[u]; ++a)
    for (Int b = lo[v]; b <= hi[v]; ++b) {
      Int rest = k - w[u] * a - w[v] * b;
      count_ops(3);
      if (rest % w[solve] != 0) continue;
      Int c = rest / w[solve];
      if (c < lo[solve] || c > hi[solve]) continue;
      IntVec3 x;
      x[u] = a;
      x[v] = b;
      x[solve] = c;
      if (orthant_sign_vector(e, x) == signs) out.push_back(x);
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// A sail vertex: the lexicographically smallest integer point on the lowest nonempty slice
/// <w, x> = k, k = 1 .. <w, P>.
inline IntVec3 find_sail_vertex(const EigenData& e, const OrthantRef& ref, const IntVec3& p, const IntVec3& w) {
  if (orthant_sign_vector(e, p) != ref.signs) throw DomainError("point " + to_string(p) + " is not in the orthant");
  if (!detail::positive_on_rays(e, ref.signs, w))
    throw DomainError("slice normal " + to_string(w) + " is not positive on the orthant");
  Int top = dot(w, p);
  for (Int k = 1; k <= top; ++k) {
    auto pts = orthant_slice(e, ref.signs, w, k);
    if (!pts.empty()) return pts.front();
  }
  throw DomainError("no integer point below the slice through P");
}

inline IntVec3 find_sail_vertex(const EigenData& e, const OrthantRef& ref, const IntVec3& p) {
  return find_sail_vertex(e, ref, p, find_slice_normal(e, ref.signs));
}

/// Vertices of the hull of the nonzero integer points of H = conv(O, V, B1 V, B2 V, B1 B2 V).
inline std::vector<IntVec3> seed_hull(const IntVec3& v, const DirichletPair& pair) {
  std::vector<IntVec3> gens{IntVec3(0, 0, 0), v, pair.B1 * v, pair.B2 * v, pair.B1 * (pair.B2 * v)};
  PolyMesh h = hull3d(gens);
  std::vector<Halfspace> hs;
  for (const auto& pl : h.planes) hs.push_back({pl.normal, Rat(pl.offset)});
  IntVec3 lo = gens[0], hi = gens[0];
  for (const auto& g : gens)
    for (std::size_t k = 0; k < 3; ++k) {
      if (g[k] < lo[k]) lo[k] = g[k];
      if (g[k] > hi[k]) hi[k] = g[k];
    }
  auto pts = lattice_points(hs, lo, hi);
  pts.erase(std::remove(pts.begin(), pts.end(), IntVec3(0, 0, 0)), pts.end());
  if (affine_rank(pts) < 3) return pts;
  return hull3d(pts).vertices;
}

enum class ExponentRange { paper, symmetric };

inline const char* to_string(ExponentRange r) { return r == ExponentRange::paper ? "paper" : "symmetric"; }

/// Hull of group images of the seeds, with faces away from the extreme exponent shell marked trusted.
struct ApproxMesh {
  PolyMesh mesh;
  std::vector<bool> trusted;
  long m = 0;
  ExponentRange range = ExponentRange::paper;
};

inline ApproxMesh special_approximation(const std::vector<IntVec3>& seeds, const DirichletPair& pair, long m,
                                        ExponentRange range = ExponentRange::paper) {
  if (m < 1) throw DomainError("approximation index m must be at least 1");
  const long lo = range == ExponentRange::paper ? 1 : -m;
  const long hi = m;
  std::map<IntVec3, bool> interior;
  for (long i = lo; i <= hi; ++i) {
    IntMat3 gi = power(pair.B1, i);
    for (long j = lo; j <= hi; ++j) {
      IntMat3 g = gi * power(pair.B2, j);
      bool inner = i > lo && i < hi && j > lo && j < hi;
      for (const auto& s : seeds) {
        auto [it, fresh] = interior.emplace(g * s, inner);
        if (!fresh) it->second = it->second || inner;
      }
    }
  }
  std::vector<IntVec3> pts;
  for (const auto& [p, _] : interior) pts.push_back(p);
  ApproxMesh out;
  out.mesh = hull3d(pts);
  out.m = m;
  out.range = range;
  for (std::size_t f = 0; f < out.mesh.faces.size(); ++f) {
    bool ok = out.mesh.planes[f].offset < 0;  // the origin lies beyond the face
    for (auto v : out.mesh.faces[f]) ok = ok && interior.at(out.mesh.vertices[v]);
    out.trusted.push_back(ok);
  }
  return out;
}

/// Partition of mesh faces into orbits under B1^n B2^m, |n|, |m| <= radius.
inline std::vector<int> orbit_classes(const PolyMesh& mesh, const DirichletPair& pair, long radius = 2) {
  if (radius < 1) throw DomainError("word radius must be at least 1");
  std::map<std::vector<IntVec3>, std::size_t> key;
  auto face_key = [&](const std::vector<IntVec3>& pts) {
    auto k = pts;
    std::sort(k.begin(), k.end());
    return k;
  };
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) key[face_key(mesh.face_points(f))] = f;
  detail::UnionFind uf(mesh.faces.size());
  for (long i = -radius; i <= radius; ++i)
    for (long j = -radius; j <= radius; ++j) {
      if (i == 0 && j == 0) continue;
      IntMat3 g = power(pair.B1, i) * power(pair.B2, j);
      for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        std::vector<IntVec3> img;
        for (const auto& p : mesh.face_points(f)) img.push_back(g * p);
        auto it = key.find(face_key(img));
        if (it != key.end()) uf.unite(f, it->second);
      }
    }
  std::vector<int> cls(mesh.faces.size());
  std::map<std::size_t, int> ids;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    auto [it, _] = ids.emplace(uf.find(f), static_cast<int>(ids.size()));
    cls[f] = it->second;
  }
  return cls;
}

/// Greedy system of orbit representatives grown from trusted faces near the origin.
inline DomainCandidate extract_candidate(const ApproxMesh& approx, const std::vector<int>& classes,
                                         const DirichletPair& pair, long word_length = 2) {
  const auto& mesh = approx.mesh;
  std::set<int> wanted;
  std::vector<std::size_t> trusted;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f)
    if (approx.trusted[f]) {
      wanted.insert(classes[f]);
      trusted.push_back(f);
    }
  if (trusted.empty()) throw DomainError("no trusted faces; raise m or use the symmetric exponent range");
  std::vector<Int> size(mesh.faces.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f)
    for (const auto& p : mesh.face_points(f)) size[f] += abs(p[0]) + abs(p[1]) + abs(p[2]);
  auto dist = [&](std::size_t f) { return abs(mesh.planes[f].offset); };
  auto order = [&](std::size_t a, std::size_t b) {
    if (dist(a) != dist(b)) return dist(a) < dist(b);
    if (size[a] != size[b]) return size[a] < size[b];
    if (classes[a] != classes[b]) return classes[a] < classes[b];
    return a < b;
  };
  std::sort(trusted.begin(), trusted.end(), order);
  auto adjacent = [&](std::size_t f, std::size_t g) {
    const auto& a = mesh.faces[f];
    const auto& b = mesh.faces[g];
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        if (a[i] == b[(j + 1) % b.size()] && a[(i + 1) % a.size()] == b[j]) return true;
    return false;
  };
  for (auto start : trusted) {
    std::vector<std::size_t> chosen{start};
    std::set<int> covered{classes[start]};
    while (covered != wanted) {
      long pick = -1;
      for (auto f : trusted) {
        if (covered.count(classes[f])) continue;
        bool touch = false;
        for (auto c : chosen) touch = touch || adjacent(c, f);
        if (touch && (pick < 0 || order(f, static_cast<std::size_t>(pick)))) pick = static_cast<long>(f);
      }
      if (pick < 0) break;
      chosen.push_back(static_cast<std::size_t>(pick));
      covered.insert(classes[static_cast<std::size_t>(pick)]);
    }
    if (covered != wanted) continue;
    std::vector<std::vector<IntVec3>> polys;
    for (auto f : chosen) polys.push_back(mesh.face_points(f));
    auto cand = build_candidate(polys, pair, word_length);
    if (disk_failures(cand).empty()) return cand;
  }
  throw DomainError("no connected system of orbit representatives found; try a larger m or select faces manually");
}

}  // namespace sailforge
