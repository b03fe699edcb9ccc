#pragma once

#include "sailforge/candidate.hpp"
#include "sailforge/units.hpp"

namespace sailforge {

/// Companion-type operator with characteristic polynomial x^3 + n x^2 + m x - 1.
inline IntMat3 sylvester(const Int& m, const Int& n) { return IntMat3::from_rows(IntVec3(0, 1, 0), IntVec3(0, 0, 1), IntVec3(1, -m, -n)); }

struct SylvesterCase {
  long a = 0, b = 0;
  IntMat3 A;
  DirichletPair pair;
  DomainCandidate candidate;
};

/// The two-triangle fundamental domain for A_{b-a-1,(a+2)(b+1)}, a, b >= 0.
inline SylvesterCase sylvester_case(long a, long b) {
  if (a < 0 || b < 0) throw InputError("sylvester family needs a, b >= 0");
  SylvesterCase s;
  s.a = a;
  s.b = b;
  s.A = sylvester(Int(b - a - 1), Int((a + 2) * (b + 1)));
  IntMat3 inv = inverse_unimodular(s.A);
  IntMat3 x = inv * inv;
  IntMat3 y = inv * (inv - Int(b + 1) * IntMat3::identity());
  s.pair = {x, y, Provenance::user, 0};

  auto& d = s.candidate;
  const Int b1 = b + 1;
  // A, B, C, D
  d.vertices = {IntVec3(1, 0, a + 2), IntVec3(0, 0, 1), IntVec3(b - a - 1, 1, 0), IntVec3(b1 * b1, b1, 1)};
  d.edges = {{0, 1}, {0, 3}, {1, 3}, {3, 2}, {2, 1}};
  d.faces = {{0, 1, 3}, {1, 2, 3}};
  d.owned_vertices = {0};
  d.owned_edges = {0, 1, 2};
  d.owned_faces = {0, 1};
  d.gluing = {{0, 3, Word::of(1, 0)}, {1, 4, Word::of(0, 1)}};
  return s;
}

}  // namespace sailforge
