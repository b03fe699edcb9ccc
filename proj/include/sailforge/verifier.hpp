#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sailforge/candidate.hpp"
#include "sailforge/commutant.hpp"
#include "sailforge/exact/hull.hpp"
#include "sailforge/exact/lattice.hpp"
#include "sailforge/exact/polygon.hpp"
#include "sailforge/sail.hpp"
#include "sailforge/units.hpp"

namespace sailforge {

enum class StageStatus { pass, fail, indeterminate };

inline const char* to_string(StageStatus s) {
  switch (s) {
    case StageStatus::pass: return "pass";
    case StageStatus::fail: return "fail";
    default: return "indeterminate";
  }
}

struct StageResult {
  int id = 0;
  std::string name;
  StageStatus status = StageStatus::indeterminate;
  std::vector<std::string> witness;  // nonempty unless the stage passed
  double millis = 0;

  bool passed() const { return status == StageStatus::pass; }
};

inline const std::array<const char*, 7> stage_names{"disk",      "torus",    "distances", "pyramids",
                                                   "dihedral", "stars", "orthant"};

enum class Verdict { fundamental, rejected, indeterminate };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::fundamental: return "fundamental";
    case Verdict::rejected: return "rejected";
    default: return "indeterminate";
  }
}

enum class Stage4Mode { classification, bruteforce, both };

inline Stage4Mode parse_stage4_mode(const std::string& s) {
  if (s == "classification") return Stage4Mode::classification;
  if (s == "bruteforce") return Stage4Mode::bruteforce;
  if (s == "both") return Stage4Mode::both;
  throw InputError("unknown stage-4 mode '" + s + "'");
}

/// f_F(w) f_F(O) for a vertex w of the partner face across an owned edge.
struct DihedralRecord {
  std::size_t edge = 0;
  std::vector<IntVec3> face;
  std::vector<IntVec3> partner;
  IntVec3 vertex;
  Int product;
};

struct FanCell {
  int dim = 2;  // 0 vertex, 1 open edge, 2 open face
  std::vector<IntVec3> points;
  std::vector<std::pair<Int, Int>> conditions;  // c0 + c1 eps, each must be > 0 for small eps
  bool qualifies = false;
};

struct StarRecord {
  IntVec3 vertex;
  IntVec3 direction;
  std::vector<FanCell> cells;
  std::size_t qualifying = 0;
};

struct FaceClass {
  int family = 0;  // 0 none, 1..3
  std::vector<long> params;
  IntMat3 transition;

  std::string str() const {
    if (family == 0) return "unclassified";
    std::string s = "family " + std::to_string(family);
    for (std::size_t i = 0; i < params.size(); ++i) s += (i ? "," : " (") + std::to_string(params[i]);
    return s + (params.empty() ? "" : ")");
  }
};

struct PyramidRecord {
  std::size_t face = 0;
  Int distance;
  std::optional<FaceClass> classification;
  std::optional<bool> empty;  // bruteforce outcome
};

struct VerificationReport {
  std::array<StageResult, 7> stages;
  Verdict verdict = Verdict::indeterminate;
  std::vector<Int> distances;
  std::vector<PyramidRecord> pyramids;
  std::vector<DihedralRecord> dihedral;
  std::vector<StarRecord> stars;
  unsigned long long ops = 0;
  double millis = 0;
};

/// |det(V1, V2, V3)| / content(cross(V2 - V1, V3 - V1)).
inline Int integer_distance(const IntVec3& v1, const IntVec3& v2, const IntVec3& v3) {
  IntVec3 c = cross(v2 - v1, v3 - v1);
  if (c.is_zero()) throw DomainError("collinear points have no plane");
  Int d = abs(det3(v1, v2, v3));
  if (d == 0) throw DomainError("plane through the origin");
  Int g = ivec_content(c);
  count_ops(20);
  if (d % g != 0) throw std::logic_error("integer distance is not integral");
  return d / g;
}

/// M with M t2_i = t1_i, integer with |det M| = 1, if one exists.
inline std::optional<IntMat3> face_equivalence(const std::array<IntVec3, 3>& t1, const std::array<IntVec3, 3>& t2) {
  IntMat3 p = IntMat3::from_columns(t1[0], t1[1], t1[2]);
  IntMat3 q = IntMat3::from_columns(t2[0], t2[1], t2[2]);
  Int dq = det3(q);
  if (dq == 0) return std::nullopt;
  IntMat3 m = p * adjugate(q);
  for (auto& x : m.e) {
    if (x % dq != 0) return std::nullopt;
    x /= dq;
  }
  Int dm = det3(m);
  if (dm != 1 && dm != -1) return std::nullopt;
  return m;
}

namespace detail {

inline std::vector<std::pair<FaceClass, std::array<IntVec3, 3>>> face_templates(const Int& r, const Int& area2) {
  std::vector<std::pair<FaceClass, std::array<IntVec3, 3>>> out;
  if (r >= 2 && area2 >= 1) {
    const Int& a = area2;
    for (Int xi = 1; 2 * xi <= r; ++xi) {
      if (gcd(xi, r) != 1) continue;
      FaceClass c{1, {static_cast<long>(xi), static_cast<long>(r), static_cast<long>(a)}, {}};
      out.push_back({c, {IntVec3(xi, r - 1, -r), IntVec3(a + xi, r - 1, -r), IntVec3(xi, r, -r)}});
    }
  }
  if (r == 2 && area2 % 2 == 0 && area2 >= 4) {
    Int b = area2 / 2;
    FaceClass c{2, {static_cast<long>(b)}, {}};
    out.push_back({c, {IntVec3(2, 1, b - 1), IntVec3(2, 2, -1), IntVec3(2, 0, -1)}});
  }
  const std::array<std::array<IntVec3, 3>, 2> fixed{
      std::array<IntVec3, 3>{IntVec3(2, -2, 1), IntVec3(2, -1, -1), IntVec3(2, 1, 2)},
      std::array<IntVec3, 3>{IntVec3(3, 0, 2), IntVec3(3, 1, 1), IntVec3(3, 2, 3)}};
  for (long k = 0; k < 2; ++k) out.push_back({FaceClass{3, {k + 1}, {}}, fixed[static_cast<std::size_t>(k)]});
  return out;
}

}  // namespace detail

/// Matches a face at integer distance r >= 2 against the three families of empty pyramids.
inline std::optional<FaceClass> classify_face(const std::vector<IntVec3>& face, const Int& r) {
  if (face.size() != 3) return std::nullopt;
  Int area2 = ivec_content(cross(face[1] - face[0], face[2] - face[0]));
  std::array<std::size_t, 3> perm{0, 1, 2};
  for (auto& [cls, tri] : detail::face_templates(r, area2)) {
    do {
      std::array<IntVec3, 3> f{face[perm[0]], face[perm[1]], face[perm[2]]};
      if (auto m = face_equivalence(f, tri)) {
        FaceClass out = cls;
        out.transition = *m;
        return out;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return std::nullopt;
}

/// First integer point of the pyramid conv(O, face) off O and off the face's plane.
inline std::optional<IntVec3> pyramid_interior_point(const std::vector<IntVec3>& face) {
  std::vector<IntVec3> pts = face;
  pts.emplace_back(0, 0, 0);
  PolyMesh h = hull3d(pts);
  std::vector<Halfspace> hs;
  for (const auto& pl : h.planes) hs.push_back({pl.normal, Rat(pl.offset)});
  IntVec3 lo(0, 0, 0), hi(0, 0, 0);
  for (const auto& p : face)
    for (std::size_t k = 0; k < 3; ++k) {
      if (p[k] < lo[k]) lo[k] = p[k];
      if (p[k] > hi[k]) hi[k] = p[k];
    }
  IntVec3 n = cross(face[1] - face[0], face[2] - face[1]);
  Int off = dot(n, face[0]);
  for (const auto& p : lattice_points(hs, lo, hi)) {
    if (p.is_zero()) continue;
    if (dot(n, p) != off) return p;
  }
  return std::nullopt;
}

namespace detail {

inline std::string cell_name(const char* kind, std::size_t i) { return std::string(kind) + " " + std::to_string(i); }

inline std::string points_str(const std::vector<IntVec3>& pts) {
  std::string s = "[";
  for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? " " : "") + to_string(pts[i]);
  return s + "]";
}

inline std::vector<IntVec3> map_points(const IntMat3& g, const std::vector<IntVec3>& pts) {
  std::vector<IntVec3> out;
  for (const auto& p : pts) out.push_back(g * p);
  return out;
}

/// Face cycles reoriented consistently across interior edges, starting from face 0.
inline std::vector<std::vector<std::size_t>> coherent_faces(const DomainCandidate& d) {
  auto faces = d.faces;
  std::vector<int> state(faces.size(), 0);
  auto directed = [](const std::vector<std::size_t>& c, std::size_t u, std::size_t v) {
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] == u && c[(i + 1) % c.size()] == v) return true;
    return false;
  };
  for (std::size_t s = 0; s < faces.size(); ++s) {
    if (state[s]) continue;
    state[s] = 1;
    std::vector<std::size_t> queue{s};
    for (std::size_t q = 0; q < queue.size(); ++q) {
      std::size_t f = queue[q];
      const auto& c = faces[f];
      for (std::size_t i = 0; i < c.size(); ++i) {
        std::size_t u = c[i], v = c[(i + 1) % c.size()];
        long e = d.find_edge(u, v);
        if (e < 0) continue;
        for (auto g : d.faces_of_edge(static_cast<std::size_t>(e))) {
          if (g == f || state[g]) continue;
          if (directed(faces[g], u, v)) std::reverse(faces[g].begin(), faces[g].end());
          state[g] = 1;
          queue.push_back(g);
        }
      }
    }
  }
  return faces;
}

/// Start and end vertex of edge e as traversed by its (unique) face in the coherent orientation.
inline std::pair<std::size_t, std::size_t> traversal(const std::vector<std::vector<std::size_t>>& faces,
                                                     std::size_t f, std::size_t u, std::size_t v) {
  const auto& c = faces[f];
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] == u && c[(i + 1) % c.size()] == v) return {u, v};
  return {v, u};
}

struct GluingSide {
  std::size_t gluing;
  bool from;  // edge is the source of the gluing word
};

}  // namespace detail

/// Closure is a disk whose face closures meet properly.
inline StageResult stage1_disk(const DomainCandidate& d) {
  StageResult r{1, stage_names[0], StageStatus::pass, {}, 0};
  std::vector<ConvexPolygon> polys;
  for (std::size_t f = 0; f < d.faces.size(); ++f) polys.emplace_back(d.face_points(f));
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (std::size_t j = i + 1; j < polys.size(); ++j)
      if (auto bad = improper_meeting(polys[i], polys[j]))
        r.witness.push_back(detail::cell_name("face", i) + " / " + detail::cell_name("face", j) + ": " + *bad);
  for (auto& s : disk_failures(d)) r.witness.push_back(std::move(s));
  if (!r.witness.empty()) r.status = StageStatus::fail;
  return r;
}

/// Gluing the boundary by the declared words yields a torus with owned cells as its cells.
inline StageResult stage2_torus(const DomainCandidate& d, const DirichletPair& pair) {
  StageResult r{2, stage_names[1], StageStatus::pass, {}, 0};
  auto fail = [&](std::string s) {
    r.status = StageStatus::fail;
    r.witness.push_back(std::move(s));
  };
  for (std::size_t g = 0; g < d.gluing.size(); ++g)
    if (d.gluing[g].word.letters.empty()) {
      r.status = StageStatus::indeterminate;
      r.witness.push_back("gluing " + std::to_string(g) + " has no word; supply one (e.g. from the conjecture step)");
    }
  if (r.status == StageStatus::indeterminate) return r;

  const auto faces = detail::coherent_faces(d);
  std::vector<std::vector<detail::GluingSide>> sides(d.edges.size());
  for (std::size_t g = 0; g < d.gluing.size(); ++g) {
    sides[d.gluing[g].from].push_back({g, true});
    sides[d.gluing[g].to].push_back({g, false});
  }
  std::vector<std::size_t> nfaces(d.edges.size());
  for (std::size_t e = 0; e < d.edges.size(); ++e) nfaces[e] = d.faces_of_edge(e).size();
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    if (nfaces[e] == 1 && sides[e].size() != 1)
      fail("boundary edge " + std::to_string(e) + " appears in " + std::to_string(sides[e].size()) + " gluings");
    if (nfaces[e] != 1 && !sides[e].empty()) fail("interior edge " + std::to_string(e) + " is glued");
  }
  std::vector<IntMat3> mats;
  for (const auto& gl : d.gluing) mats.push_back(word_matrix(gl.word, pair));

  detail::UnionFind vclass(d.vertices.size());
  for (std::size_t g = 0; g < d.gluing.size(); ++g) {
    const auto& gl = d.gluing[g];
    if (gl.from == gl.to) {
      fail("gluing " + std::to_string(g) + " maps edge " + std::to_string(gl.from) + " to itself");
      continue;
    }
    if (nfaces[gl.from] != 1 || nfaces[gl.to] != 1) continue;
    auto [u, v] = d.edges[gl.from];
    auto [a, b] = detail::traversal(faces, d.faces_of_edge(gl.from)[0], u, v);
    auto [c, dd] = detail::traversal(faces, d.faces_of_edge(gl.to)[0], d.edges[gl.to].first, d.edges[gl.to].second);
    IntVec3 ga = mats[g] * d.vertices[a], gb = mats[g] * d.vertices[b];
    const std::string tag = "gluing " + std::to_string(g) + " (" + gl.word.str() + ")";
    if (ga == d.vertices[dd] && gb == d.vertices[c]) {
      vclass.unite(a, dd);
      vclass.unite(b, c);
    } else if (ga == d.vertices[c] && gb == d.vertices[dd]) {
      fail(tag + ": edge " + std::to_string(gl.from) + " is carried onto edge " + std::to_string(gl.to) +
           " with the orientation of a Klein bottle");
    } else {
      fail(tag + ": image of edge " + std::to_string(gl.from) + " is " + detail::points_str({ga, gb}) +
           ", not edge " + std::to_string(gl.to) + " " + detail::points_str({d.vertices[c], d.vertices[dd]}));
    }
  }
  if (r.status != StageStatus::pass) return r;

  // images of faces under gluing words meet the faces properly
  std::vector<ConvexPolygon> polys;
  for (std::size_t f = 0; f < d.faces.size(); ++f) polys.emplace_back(d.face_points(f));
  for (std::size_t g = 0; g < mats.size(); ++g)
    for (int sgn : {1, -1}) {
      IntMat3 m = sgn > 0 ? mats[g] : inverse_unimodular(mats[g]);
      for (std::size_t f = 0; f < d.faces.size(); ++f) {
        ConvexPolygon img(detail::map_points(m, d.face_points(f)));
        for (std::size_t h = 0; h < polys.size(); ++h)
          if (auto bad = improper_meeting(img, polys[h]))
            fail("image of face " + std::to_string(f) + " under " + (sgn > 0 ? d.gluing[g].word : d.gluing[g].word.inverse()).str() +
                 " overlaps face " + std::to_string(h) + ": " + *bad);
      }
    }

  // link of every glued vertex is a single cycle of corners
  struct Corner {
    std::size_t face, vertex;
  };
  std::vector<Corner> corners;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> corner_id;
  for (std::size_t f = 0; f < faces.size(); ++f)
    for (auto v : faces[f]) {
      corner_id[{f, v}] = corners.size();
      corners.push_back({f, v});
    }
  detail::UnionFind link(corners.size());
  for (std::size_t k = 0; k < corners.size(); ++k) {
    auto [f, v] = corners[k];
    const auto& c = faces[f];
    std::size_t pos = static_cast<std::size_t>(std::find(c.begin(), c.end(), v) - c.begin());
    for (std::size_t w : {c[(pos + 1) % c.size()], c[(pos + c.size() - 1) % c.size()]}) {
      std::size_t e = static_cast<std::size_t>(d.find_edge(v, w));
      if (nfaces[e] == 2) {
        for (auto g : d.faces_of_edge(e))
          if (g != f) link.unite(k, corner_id.at({g, v}));
        continue;
      }
      const auto& s = sides[e][0];
      const auto& gl = d.gluing[s.gluing];
      IntMat3 m = s.from ? mats[s.gluing] : inverse_unimodular(mats[s.gluing]);
      std::size_t other = s.from ? gl.to : gl.from;
      std::size_t v2 = static_cast<std::size_t>(d.find_vertex(m * d.vertices[v]));
      link.unite(k, corner_id.at({d.faces_of_edge(other)[0], v2}));
    }
  }
  std::map<std::size_t, std::set<std::size_t>> cycles;
  for (std::size_t k = 0; k < corners.size(); ++k) cycles[vclass.find(corners[k].vertex)].insert(link.find(k));
  for (const auto& [v, comps] : cycles)
    if (comps.size() != 1)
      fail("link of vertex class of " + std::to_string(v) + " splits into " + std::to_string(comps.size()) +
           " corner cycles");

  std::set<std::size_t> vroots;
  for (std::size_t v = 0; v < d.vertices.size(); ++v) vroots.insert(vclass.find(v));
  long vq = static_cast<long>(vroots.size());
  long eq = static_cast<long>(d.edges.size()) - static_cast<long>(d.gluing.size());
  long fq = static_cast<long>(d.faces.size());
  if (vq - eq + fq != 0)
    fail("Euler characteristic of the glued surface is " + std::to_string(vq) + " - " + std::to_string(eq) + " + " +
         std::to_string(fq) + " = " + std::to_string(vq - eq + fq) + ", expected 0");

  std::set<std::size_t> owned_v;
  for (auto v : d.owned_vertices) owned_v.insert(vclass.find(v));
  if (owned_v.size() != d.owned_vertices.size() || static_cast<long>(owned_v.size()) != vq)
    fail("owned vertices " + std::to_string(d.owned_vertices.size()) + " do not biject onto " + std::to_string(vq) +
         " vertex classes");
  std::vector<std::size_t> eclass(d.edges.size());
  std::iota(eclass.begin(), eclass.end(), std::size_t{0});
  for (const auto& gl : d.gluing) {
    eclass[gl.to] = std::min(gl.from, gl.to);
    eclass[gl.from] = eclass[gl.to];
  }
  std::set<std::size_t> owned_e;
  for (auto e : d.owned_edges) owned_e.insert(eclass[e]);
  if (owned_e.size() != d.owned_edges.size() || static_cast<long>(owned_e.size()) != eq)
    fail("owned edges " + std::to_string(d.owned_edges.size()) + " do not biject onto " + std::to_string(eq) +
         " edge classes");
  std::set<std::size_t> owned_f(d.owned_faces.begin(), d.owned_faces.end());
  if (owned_f.size() != d.owned_faces.size() || static_cast<long>(owned_f.size()) != fq)
    fail("owned faces " + std::to_string(d.owned_faces.size()) + " do not biject onto " + std::to_string(fq) +
         " faces");
  return r;
}

inline StageResult stage3_distances(const DomainCandidate& d, std::vector<Int>* distances = nullptr) {
  StageResult r{3, stage_names[2], StageStatus::pass, {}, 0};
  for (std::size_t f = 0; f < d.faces.size(); ++f) {
    auto p = d.face_points(f);
    if (det3(p[0], p[1], p[2]) == 0) {
      r.status = StageStatus::fail;
      r.witness.push_back("plane of face " + std::to_string(f) + " passes through the origin");
      if (distances) distances->push_back(0);
      continue;
    }
    Int dist = integer_distance(p[0], p[1], p[2]);
    if (distances) distances->push_back(dist);
  }
  return r;
}

inline StageResult stage4_pyramids(const DomainCandidate& d, Stage4Mode mode,
                                   std::vector<PyramidRecord>* records = nullptr) {
  StageResult r{4, stage_names[3], StageStatus::pass, {}, 0};
  for (std::size_t f = 0; f < d.faces.size(); ++f) {
    auto p = d.face_points(f);
    PyramidRecord rec{f, integer_distance(p[0], p[1], p[2]), std::nullopt, std::nullopt};
    if (rec.distance > 1) {
      bool ok_c = true, ok_b = true;
      std::optional<IntVec3> inner;
      if (mode != Stage4Mode::bruteforce) {
        auto cls = classify_face(p, rec.distance);
        rec.classification = cls.value_or(FaceClass{});
        ok_c = cls.has_value();
      }
      if (mode != Stage4Mode::classification) {
        inner = pyramid_interior_point(p);
        rec.empty = !inner;
        ok_b = !inner;
      }
      if (mode == Stage4Mode::both && ok_c != ok_b)
        throw std::logic_error("stage 4 modes disagree on face " + std::to_string(f) + " " + detail::points_str(p));
      if (!ok_c || !ok_b) {
        r.status = StageStatus::fail;
        std::string s = "face " + std::to_string(f) + " at integer distance " + to_string(rec.distance);
        if (inner) s += " has integer point " + to_string(*inner) + " inside its pyramid";
        else s += (p.size() == 3 ? " is not equivalent to any empty-pyramid triangle"
                                 : " is not a triangle");
        r.witness.push_back(s);
      }
    }
    if (records) records->push_back(rec);
  }
  return r;
}

namespace detail {

/// Partner face of owned edge e across the surface, as points, with the face holding e.
inline std::vector<std::pair<std::vector<IntVec3>, std::vector<IntVec3>>> edge_face_pairs(const DomainCandidate& d,
                                                                                          const DirichletPair& pair,
                                                                                          std::size_t e) {
  auto fs = d.faces_of_edge(e);
  if (fs.size() == 2) return {{d.face_points(fs[0]), d.face_points(fs[1])}};
  if (fs.size() != 1) throw StructuralError("edge " + std::to_string(e) + " has no incident face");
  for (const auto& gl : d.gluing) {
    if (gl.from == e) {
      IntMat3 g = word_matrix(gl.word, pair);
      return {{d.face_points(fs[0]), map_points(inverse_unimodular(g), d.face_points(d.faces_of_edge(gl.to).at(0)))}};
    }
    if (gl.to == e) {
      IntMat3 g = word_matrix(gl.word, pair);
      return {{d.face_points(fs[0]), map_points(g, d.face_points(d.faces_of_edge(gl.from).at(0)))}};
    }
  }
  throw StructuralError("boundary edge " + std::to_string(e) + " has no gluing");
}

}  // namespace detail

/// Dihedral angle at every owned edge has the origin in its opposite angle.
inline StageResult stage5_dihedral(const DomainCandidate& d, const DirichletPair& pair,
                                   std::vector<DihedralRecord>* records = nullptr) {
  StageResult r{5, stage_names[4], StageStatus::pass, {}, 0};
  for (auto e : d.owned_edges) {
    for (const auto& [f1, f2] : detail::edge_face_pairs(d, pair, e)) {
      for (int side = 0; side < 2; ++side) {
        const auto& f = side ? f2 : f1;
        const auto& g = side ? f1 : f2;
        IntVec3 n = primitive(cross(f[1] - f[0], f[2] - f[1]));
        Int off = dot(n, f[0]);
        bool off_plane = false;
        for (const auto& w : g) {
          Int fw = dot(n, w) - off;
          count_ops(4);
          if (fw == 0) continue;
          off_plane = true;
          Int prod = fw * (-off);
          if (records) records->push_back({e, f, g, w, prod});
          if (prod >= 0) {
            r.status = StageStatus::fail;
            r.witness.push_back("edge " + std::to_string(e) + ": vertex " + to_string(w) + " of " +
                                detail::points_str(g) + " and the origin are not separated by the plane of " +
                                detail::points_str(f) + " (product " + to_string(prod) + ")");
          }
        }
        if (!off_plane) {
          r.status = StageStatus::fail;
          r.witness.push_back("edge " + std::to_string(e) + ": incident faces " + detail::points_str(f) + " and " +
                              detail::points_str(g) + " are coplanar");
          break;
        }
      }
    }
  }
  return r;
}

namespace detail {

struct FanFace {
  std::vector<IntVec3> points;
  std::size_t face;
};

/// Faces around vertex index v in the universal cover, translated so they surround v itself.
inline std::vector<FanFace> vertex_fan(const DomainCandidate& d, const DirichletPair& pair, std::size_t v,
                                       std::vector<std::string>& problems) {
  std::vector<IntMat3> mats;
  for (const auto& gl : d.gluing) mats.push_back(word_matrix(gl.word, pair));
  std::vector<FanFace> fan;
  std::size_t start = d.faces.size();
  for (std::size_t f = 0; f < d.faces.size() && start == d.faces.size(); ++f)
    for (auto i : d.faces[f])
      if (i == v) start = f;
  if (start == d.faces.size()) {
    problems.push_back("vertex " + std::to_string(v) + " lies on no face");
    return fan;
  }
  // corners in the class bound the walk length
  std::size_t limit = 0;
  for (const auto& c : d.faces) limit += c.size();
  std::size_t face = start, cur = v;
  IntMat3 t = IntMat3::identity();
  long came = -1;  // edge index we entered through
  for (std::size_t step = 0; step <= limit; ++step) {
    fan.push_back({map_points(t, d.face_points(face)), face});
    const auto& c = d.faces[face];
    std::size_t pos = static_cast<std::size_t>(std::find(c.begin(), c.end(), cur) - c.begin());
    std::size_t e = 0;
    bool found = false;
    for (std::size_t w : {c[(pos + 1) % c.size()], c[(pos + c.size() - 1) % c.size()]}) {
      long cand = d.find_edge(cur, w);
      if (cand >= 0 && cand != came) {
        e = static_cast<std::size_t>(cand);
        found = true;
        break;
      }
    }
    if (!found) {
      problems.push_back("fan walk at vertex " + std::to_string(v) + " is stuck at face " + std::to_string(face));
      return fan;
    }
    auto fs = d.faces_of_edge(e);
    if (fs.size() == 2) {
      face = fs[0] == face ? fs[1] : fs[0];
      came = static_cast<long>(e);
    } else {
      bool moved = false;
      for (std::size_t g = 0; g < d.gluing.size() && !moved; ++g) {
        const auto& gl = d.gluing[g];
        if (gl.from != e && gl.to != e) continue;
        IntMat3 m = gl.from == e ? mats[g] : inverse_unimodular(mats[g]);
        std::size_t other = gl.from == e ? gl.to : gl.from;
        long nv = d.find_vertex(m * d.vertices[cur]);
        auto ofs = d.faces_of_edge(other);
        if (nv < 0 || ofs.size() != 1) break;
        t = t * inverse_unimodular(m);
        cur = static_cast<std::size_t>(nv);
        face = ofs[0];
        came = static_cast<long>(other);
        moved = true;
      }
      if (!moved) {
        problems.push_back("fan walk at vertex " + std::to_string(v) + " leaves through unglued edge " +
                           std::to_string(e));
        return fan;
      }
    }
    if (face == start && cur == v && t == IntMat3::identity()) return fan;
  }
  problems.push_back("fan walk at vertex " + std::to_string(v) + " does not close");
  return fan;
}

}  // namespace detail

/// Builds the fan cells at d.vertices[v] and decides which open cone holds the perturbed ray.
inline StarRecord star_at(const DomainCandidate& d, const DirichletPair& pair, std::size_t v,
                          std::vector<std::string>& problems) {
  StarRecord rec;
  const IntVec3 x = d.vertices[v];
  rec.vertex = x;
  rec.direction = (x[1] == 0 && x[2] == 0) ? IntVec3(0, 1, 0) : IntVec3(1, 0, 0);
  const IntVec3& u = rec.direction;
  auto fan = detail::vertex_fan(d, pair, v, problems);
  if (!problems.empty()) return rec;
  std::set<std::vector<IntVec3>> edges_seen;
  for (const auto& ff : fan) {
    const auto& q = ff.points;
    FanCell cell{2, q, {}, false};
    for (std::size_t i = 0; i < q.size(); ++i) {
      const IntVec3& a = q[i];
      const IntVec3& b = q[(i + 1) % q.size()];
      const IntVec3& w = q[(i + 2) % q.size()];
      Int side = det3(a, b, w);
      count_ops(30);
      cell.conditions.push_back({det3(a, b, x) * side, det3(a, b, u) * side});
      // edges through x
      if (a == x || b == x) {
        const IntVec3& o = a == x ? b : a;
        std::vector<IntVec3> key{x, o};
        if (!edges_seen.insert(key).second) continue;
        FanCell edge{1, key, {}, false};
        Int coplanar = det3(x, o, u);
        Int beta = dot(cross(x, u), cross(x, o));
        edge.conditions.push_back({Int(0), coplanar == 0 ? Int(1) : Int(0)});
        edge.conditions.push_back({Int(0), beta});
        edge.qualifies = coplanar == 0 && beta > 0;
        rec.cells.push_back(std::move(edge));
      }
    }
    cell.qualifies = true;
    for (const auto& [c0, c1] : cell.conditions)
      if (!(c0 > 0 || (c0 == 0 && c1 > 0))) cell.qualifies = false;
    rec.cells.push_back(std::move(cell));
  }
  FanCell vert{0, {x}, {}, cross(x, u).is_zero()};
  rec.cells.push_back(vert);
  for (const auto& c : rec.cells) rec.qualifying += c.qualifies;
  return rec;
}

/// Every 2-star, at every lift of a vertex in the closure, is hit exactly once by a nearby ray.
inline StageResult stage6_stars(const DomainCandidate& d, const DirichletPair& pair,
                                std::vector<StarRecord>* records = nullptr) {
  StageResult r{6, stage_names[5], StageStatus::pass, {}, 0};
  for (std::size_t v = 0; v < d.vertices.size(); ++v) {
    std::vector<std::string> problems;
    auto rec = star_at(d, pair, v, problems);
    if (!problems.empty()) {
      r.status = StageStatus::fail;
      for (auto& p : problems) r.witness.push_back(std::move(p));
      continue;
    }
    if (rec.qualifying != 1) {
      r.status = StageStatus::fail;
      std::string s = "2-star at " + to_string(rec.vertex) + " meets the ray toward " + to_string(rec.vertex) + " + eps" +
                      to_string(rec.direction) + " in " + std::to_string(rec.qualifying) + " cells";
      for (const auto& c : rec.cells)
        if (c.qualifies) s += " " + detail::points_str(c.points);
      r.witness.push_back(s);
    }
    if (records) records->push_back(std::move(rec));
  }
  return r;
}

inline StageResult stage7_orthant(const DomainCandidate& d, const IntMat3& b1) {
  StageResult r{7, stage_names[6], StageStatus::pass, {}, 0};
  if (d.owned_vertices.empty()) {
    r.status = StageStatus::fail;
    r.witness.push_back("no owned vertex");
    return r;
  }
  const IntVec3& v0 = d.vertices[d.owned_vertices.front()];
  for (std::size_t v = 0; v < d.vertices.size(); ++v) {
    if (v == d.owned_vertices.front()) continue;
    if (!same_orthant_cubic(b1, v0, d.vertices[v])) {
      r.status = StageStatus::fail;
      r.witness.push_back("det(x, B1 x, B1^2 x) vanishes on the segment " + to_string(v0) + " - " +
                          to_string(d.vertices[v]));
    }
  }
  return r;
}

inline VerificationReport verify(const IntMat3& a, const DirichletPair& pair, const DomainCandidate& d,
                                 Stage4Mode mode = Stage4Mode::both) {
  require_irreducible_hyperbolic(a);
  if (pair.B1 * a != a * pair.B1 || pair.B2 * a != a * pair.B2)
    throw InputError("generators do not commute with the operator");
  VerificationReport rep;
  for (int i = 0; i < 7; ++i) rep.stages[static_cast<std::size_t>(i)] = {i + 1, stage_names[static_cast<std::size_t>(i)],
                                                                          StageStatus::indeterminate, {}, 0};
  auto t0 = std::chrono::steady_clock::now();
  reset_op_count();
  try {
    validate_structure(d);
  } catch (const StructuralError& e) {
    for (auto& s : rep.stages) s.witness.push_back(std::string("structural error: ") + e.what());
    rep.verdict = Verdict::indeterminate;
    return rep;
  }
  auto run = [&](int id, const std::vector<int>& needs, const std::function<StageResult()>& body) {
    auto& slot = rep.stages[static_cast<std::size_t>(id - 1)];
    for (int n : needs)
      if (!rep.stages[static_cast<std::size_t>(n - 1)].passed()) {
        slot.witness.push_back("skipped: stage " + std::to_string(n) + " did not pass");
        return;
      }
    auto s = std::chrono::steady_clock::now();
    try {
      slot = body();
    } catch (const StructuralError& e) {
      slot.status = StageStatus::indeterminate;
      slot.witness.push_back(std::string("structural error: ") + e.what());
    }
    slot.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - s).count();
  };
  run(1, {}, [&] { return stage1_disk(d); });
  run(2, {1}, [&] { return stage2_torus(d, pair); });
  run(3, {}, [&] { return stage3_distances(d, &rep.distances); });
  run(4, {3}, [&] { return stage4_pyramids(d, mode, &rep.pyramids); });
  run(5, {1, 2}, [&] { return stage5_dihedral(d, pair, &rep.dihedral); });
  run(6, {1, 2}, [&] { return stage6_stars(d, pair, &rep.stars); });
  run(7, {}, [&] { return stage7_orthant(d, pair.B1); });
  bool all = true, any_fail = false;
  for (const auto& s : rep.stages) {
    all = all && s.passed();
    any_fail = any_fail || s.status == StageStatus::fail;
  }
  rep.verdict = all ? Verdict::fundamental : any_fail ? Verdict::rejected : Verdict::indeterminate;
  rep.ops = op_count();
  rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace sailforge
