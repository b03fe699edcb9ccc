#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sailforge/exact/polygon.hpp"
#include "sailforge/units.hpp"

namespace sailforge {

/// Malformed candidate: bad indices, non-planar or non-convex faces, missing face edges.
class StructuralError : public InputError {
 public:
  using InputError::InputError;
};

/// Word over {B1, B2} with integer exponents, evaluated left to right.
struct Word {
  std::vector<std::pair<int, long>> letters;  // (generator 0 or 1, exponent)

  friend bool operator==(const Word& a, const Word& b) { return a.letters == b.letters; }

  Word inverse() const {
    Word w;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) w.letters.emplace_back(it->first, -it->second);
    return w;
  }

  /// Total exponents (n, m) of B1 and B2.
  std::pair<long, long> abelian() const {
    long n = 0, m = 0;
    for (const auto& [g, e] : letters) (g == 0 ? n : m) += e;
    return {n, m};
  }

  std::string str() const {
    if (letters.empty()) return "E";
    std::string s;
    for (const auto& [g, e] : letters) {
      if (!s.empty()) s += "*";
      s += g == 0 ? "B1" : "B2";
      if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
  }

  static Word of(long n, long m) {
    Word w;
    if (n != 0) w.letters.emplace_back(0, n);
    if (m != 0) w.letters.emplace_back(1, m);
    return w;
  }
};

inline IntMat3 word_matrix(const Word& w, const DirichletPair& pair) {
  IntMat3 m = IntMat3::identity();
  for (const auto& [g, e] : w.letters) m = m * power(g == 0 ? pair.B1 : pair.B2, e);
  return m;
}

struct Gluing {
  std::size_t from = 0;  // edge index
  std::size_t to = 0;    // edge index, the image of `from` under the word
  Word word;
};

/// Closure cell complex with ownership flags and boundary gluings.
struct DomainCandidate {
  std::vector<IntVec3> vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::vector<std::size_t>> faces;
  std::vector<std::size_t> owned_vertices;
  std::vector<std::size_t> owned_edges;
  std::vector<std::size_t> owned_faces;
  std::vector<Gluing> gluing;

  std::vector<IntVec3> face_points(std::size_t f) const {
    std::vector<IntVec3> out;
    for (auto i : faces[f]) out.push_back(vertices[i]);
    return out;
  }

  /// Index of the edge joining u and v, or -1.
  long find_edge(std::size_t u, std::size_t v) const {
    for (std::size_t e = 0; e < edges.size(); ++e)
      if ((edges[e].first == u && edges[e].second == v) || (edges[e].first == v && edges[e].second == u))
        return static_cast<long>(e);
    return -1;
  }

  long find_vertex(const IntVec3& p) const {
    auto it = std::find(vertices.begin(), vertices.end(), p);
    return it == vertices.end() ? -1 : static_cast<long>(it - vertices.begin());
  }

  /// Faces whose cycle contains edge e.
  std::vector<std::size_t> faces_of_edge(std::size_t e) const {
    std::vector<std::size_t> out;
    auto [u, v] = edges[e];
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const auto& c = faces[f];
      for (std::size_t i = 0; i < c.size(); ++i) {
        std::size_t a = c[i], b = c[(i + 1) % c.size()];
        if ((a == u && b == v) || (a == v && b == u)) {
          out.push_back(f);
          break;
        }
      }
    }
    return out;
  }

  std::size_t p0() const { return owned_vertices.size(); }
  std::size_t p1() const { return owned_edges.size(); }
  std::size_t p2() const { return owned_faces.size(); }
};

/// Throws StructuralError on malformed input.
inline void validate_structure(const DomainCandidate& d) {
  const std::size_t nv = d.vertices.size();
  auto bad = [](const std::string& s) { throw StructuralError(s); };
  if (nv == 0) bad("candidate has no vertices");
  {
    std::set<IntVec3> seen(d.vertices.begin(), d.vertices.end());
    if (seen.size() != nv) bad("duplicate vertex coordinates");
  }
  std::set<std::pair<std::size_t, std::size_t>> edge_set;
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    auto [u, v] = d.edges[e];
    if (u >= nv || v >= nv) bad("edge " + std::to_string(e) + " references a missing vertex");
    if (u == v) bad("edge " + std::to_string(e) + " is a loop");
    if (!edge_set.insert({std::min(u, v), std::max(u, v)}).second) bad("edge " + std::to_string(e) + " is duplicated");
  }
  for (std::size_t f = 0; f < d.faces.size(); ++f) {
    const auto& c = d.faces[f];
    const std::string tag = "face " + std::to_string(f);
    if (c.size() < 3) bad(tag + " has fewer than 3 vertices");
    for (auto i : c)
      if (i >= nv) bad(tag + " references a missing vertex");
    if (std::set<std::size_t>(c.begin(), c.end()).size() != c.size()) bad(tag + " repeats a vertex");
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::size_t a = c[i], b = c[(i + 1) % c.size()];
      if (!edge_set.count({std::min(a, b), std::max(a, b)}))
        bad(tag + " uses an edge missing from the edge list");
    }
    auto pts = d.face_points(f);
    IntVec3 n = cross(pts[1] - pts[0], pts[2] - pts[1]);
    if (n.is_zero()) bad(tag + " is degenerate (collinear vertices)");
    for (const auto& p : pts)
      if (dot(n, p - pts[0]) != 0) bad(tag + " is not planar");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& a = pts[i];
      const auto& b = pts[(i + 1) % pts.size()];
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j == i || j == (i + 1) % pts.size()) continue;
        if (dot(cross(b - a, pts[j] - a), n) <= 0) bad(tag + " is not a strictly convex polygon");
      }
    }
  }
  for (auto v : d.owned_vertices)
    if (v >= nv) bad("owned vertex index out of range");
  for (auto e : d.owned_edges)
    if (e >= d.edges.size()) bad("owned edge index out of range");
  for (auto f : d.owned_faces)
    if (f >= d.faces.size()) bad("owned face index out of range");
  for (std::size_t g = 0; g < d.gluing.size(); ++g) {
    const auto& gl = d.gluing[g];
    if (gl.from >= d.edges.size() || gl.to >= d.edges.size())
      bad("gluing " + std::to_string(g) + " references a missing edge");
    for (const auto& [gen, e] : gl.word.letters)
      if (gen != 0 && gen != 1) bad("gluing " + std::to_string(g) + " uses an unknown generator");
  }
}

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

/// Words B1^i B2^j with 0 < |i| + |j| <= length, shortest first, positive ones before their inverses.
inline std::vector<std::pair<long, long>> short_words(long length) {
  std::vector<std::pair<long, long>> out;
  for (long s = 1; s <= length; ++s)
    for (long i = s; i >= -s; --i) {
      long r = s - std::labs(i);
      for (long j : {r, -r}) {
        out.emplace_back(i, j);
        if (r == 0) break;
      }
    }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    bool pa = a.first > 0 || (a.first == 0 && a.second > 0);
    bool pb = b.first > 0 || (b.first == 0 && b.second > 0);
    long la = std::labs(a.first) + std::labs(a.second), lb = std::labs(b.first) + std::labs(b.second);
    if (la != lb) return la < lb;
    return pa && !pb;
  });
  return out;
}

inline bool positive_word(const std::pair<long, long>& w) { return w.first > 0 || (w.first == 0 && w.second > 0); }

}  // namespace detail

/// Combinatorial disk conditions on the closure complex; returns human-readable failures.
/// Checks: every edge lies on 1 or 2 faces, boundary edges form one simple cycle, the complex is
/// connected, and V - E + F = 1.
inline std::vector<std::string> disk_failures(const DomainCandidate& d) {
  std::vector<std::string> out;
  std::vector<std::size_t> boundary;
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    auto n = d.faces_of_edge(e).size();
    if (n == 0 || n > 2)
      out.push_back("edge " + std::to_string(e) + " lies on " + std::to_string(n) + " faces");
    if (n == 1) boundary.push_back(e);
  }
  {
    std::map<std::size_t, std::vector<std::size_t>> deg;
    for (auto e : boundary) {
      deg[d.edges[e].first].push_back(e);
      deg[d.edges[e].second].push_back(e);
    }
    bool simple = !boundary.empty();
    for (const auto& [v, es] : deg)
      if (es.size() != 2) {
        simple = false;
        out.push_back("boundary vertex " + std::to_string(v) + " has boundary degree " + std::to_string(es.size()));
      }
    if (simple) {
      // walk the boundary from its first edge
      std::size_t start = boundary.front(), cur = start, v = d.edges[start].second, steps = 0;
      do {
        const auto& es = deg[v];
        std::size_t next = es[0] == cur ? es[1] : es[0];
        v = d.edges[next].first == v ? d.edges[next].second : d.edges[next].first;
        cur = next;
        ++steps;
      } while (cur != start && steps <= boundary.size());
      if (steps != boundary.size())
        out.push_back("boundary edges form more than one cycle (" + std::to_string(steps) + " of " +
                      std::to_string(boundary.size()) + " edges on the first)");
    } else if (boundary.empty()) {
      out.push_back("complex has no boundary edges");
    }
  }
  {
    detail::UnionFind uf(d.vertices.size());
    for (const auto& [u, v] : d.edges) uf.unite(u, v);
    std::set<std::size_t> roots;
    for (std::size_t v = 0; v < d.vertices.size(); ++v) roots.insert(uf.find(v));
    if (roots.size() != 1) out.push_back("complex has " + std::to_string(roots.size()) + " connected components");
  }
  long chi = static_cast<long>(d.vertices.size()) - static_cast<long>(d.edges.size()) +
             static_cast<long>(d.faces.size());
  if (chi != 1) out.push_back("Euler characteristic V - E + F = " + std::to_string(chi) + ", expected 1");
  return out;
}

/// Builds the closure complex of the given face polygons, pairs boundary edges by short words
/// and marks one owned representative per group orbit of cells.
inline DomainCandidate build_candidate(const std::vector<std::vector<IntVec3>>& polygons, const DirichletPair& pair,
                                       long word_length = 2) {
  DomainCandidate d;
  std::set<IntVec3> vs;
  for (const auto& p : polygons) vs.insert(p.begin(), p.end());
  d.vertices.assign(vs.begin(), vs.end());
  auto idx = [&](const IntVec3& v) { return static_cast<std::size_t>(d.find_vertex(v)); };
  std::set<std::pair<std::size_t, std::size_t>> es;
  for (const auto& p : polygons) {
    std::vector<std::size_t> cyc;
    for (const auto& v : p) cyc.push_back(idx(v));
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      std::size_t a = cyc[i], b = cyc[(i + 1) % cyc.size()];
      es.insert({std::min(a, b), std::max(a, b)});
    }
    d.faces.push_back(std::move(cyc));
  }
  d.edges.assign(es.begin(), es.end());

  std::vector<std::size_t> boundary;
  for (std::size_t e = 0; e < d.edges.size(); ++e)
    if (d.faces_of_edge(e).size() == 1) boundary.push_back(e);

  // all short group elements, shortest first
  std::vector<std::pair<std::pair<long, long>, IntMat3>> words;
  for (const auto& w : detail::short_words(word_length))
    words.emplace_back(w, power(pair.B1, w.first) * power(pair.B2, w.second));

  auto edge_image = [&](std::size_t e, const IntMat3& g) -> long {
    long a = d.find_vertex(g * d.vertices[d.edges[e].first]);
    long b = d.find_vertex(g * d.vertices[d.edges[e].second]);
    if (a < 0 || b < 0) return -1;
    return d.find_edge(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  };

  std::set<std::size_t> glued;
  for (auto e : boundary) {
    if (glued.count(e)) continue;
    for (const auto& [w, g] : words) {
      if (!detail::positive_word(w)) continue;
      long img = edge_image(e, g);
      if (img >= 0 && img != static_cast<long>(e) && !glued.count(static_cast<std::size_t>(img)) &&
          d.faces_of_edge(static_cast<std::size_t>(img)).size() == 1) {
        d.gluing.push_back({e, static_cast<std::size_t>(img), Word::of(w.first, w.second)});
        glued.insert(e);
        glued.insert(static_cast<std::size_t>(img));
        break;
      }
      // the partner may be the preimage: record it with the positive word in its direction
      IntMat3 inv = inverse_unimodular(g);
      long pre = edge_image(e, inv);
      if (pre >= 0 && pre != static_cast<long>(e) && !glued.count(static_cast<std::size_t>(pre)) &&
          d.faces_of_edge(static_cast<std::size_t>(pre)).size() == 1) {
        d.gluing.push_back({static_cast<std::size_t>(pre), e, Word::of(w.first, w.second)});
        glued.insert(e);
        glued.insert(static_cast<std::size_t>(pre));
        break;
      }
    }
  }

  // ownership: in every orbit class, the member with the smallest exponent vector
  const long radius = std::max<long>(word_length, 2);
  std::vector<std::pair<std::pair<long, long>, IntMat3>> group;
  for (long i = -radius; i <= radius; ++i)
    for (long j = -radius; j <= radius; ++j) group.push_back({{i, j}, power(pair.B1, i) * power(pair.B2, j)});

  auto choose = [&](std::size_t n, auto image) {
    // image(k, g) -> index of g(cell k) or -1
    detail::UnionFind uf(n);
    std::map<std::pair<std::size_t, std::size_t>, std::pair<long, long>> rel;  // (a, b) -> exponent with g(a)=b
    for (std::size_t k = 0; k < n; ++k)
      for (const auto& [w, g] : group) {
        long img = image(k, g);
        if (img < 0) continue;
        uf.unite(k, static_cast<std::size_t>(img));
        rel[{k, static_cast<std::size_t>(img)}] = w;
      }
    // exponent vectors relative to each class root, accumulated along relations
    std::vector<std::vector<std::pair<std::size_t, std::pair<long, long>>>> adj(n);
    for (const auto& [ab, w] : rel) {
      adj[ab.first].push_back({ab.second, w});
      adj[ab.second].push_back({ab.first, {-w.first, -w.second}});
    }
    std::vector<std::pair<long, long>> expo(n);
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> owned;
    for (std::size_t k = 0; k < n; ++k) {
      if (uf.find(k) != k) continue;
      std::vector<std::size_t> queue{k};
      seen[k] = true;
      std::size_t best = k;
      for (std::size_t q = 0; q < queue.size(); ++q) {
        std::size_t cur = queue[q];
        if (expo[cur] < expo[best]) best = cur;
        for (const auto& [nb, w] : adj[cur]) {
          if (seen[nb]) continue;
          seen[nb] = true;
          expo[nb] = {expo[cur].first + w.first, expo[cur].second + w.second};
          queue.push_back(nb);
        }
      }
      owned.push_back(best);
    }
    std::sort(owned.begin(), owned.end());
    return owned;
  };

  d.owned_vertices = choose(d.vertices.size(), [&](std::size_t k, const IntMat3& g) {
    return d.find_vertex(g * d.vertices[k]);
  });
  d.owned_edges = choose(d.edges.size(), [&](std::size_t k, const IntMat3& g) { return edge_image(k, g); });
  d.owned_faces = choose(d.faces.size(), [&](std::size_t k, const IntMat3& g) -> long {
    std::vector<IntVec3> img;
    for (auto i : d.faces[k]) img.push_back(g * d.vertices[i]);
    std::sort(img.begin(), img.end());
    for (std::size_t f = 0; f < d.faces.size(); ++f) {
      auto pts = d.face_points(f);
      std::sort(pts.begin(), pts.end());
      if (pts == img) return static_cast<long>(f);
    }
    return -1;
  });
  return d;
}

}  // namespace sailforge
