#include <gtest/gtest.h>

#include "sailforge/sail.hpp"
#include "sailforge/sylvester.hpp"

#include <random>

using namespace sailforge;

namespace {

SylvesterCase base() { return sylvester_case(0, 0); }

}  // namespace

TEST(Sylvester, OperatorAndGenerators) {
  auto s = base();
  EXPECT_EQ(char_poly(s.A), IntPoly({-1, -1, 2, 1}));
  EXPECT_EQ(s.pair.B1, IntMat3({{3, -1, -1}, {-1, 2, 1}, {1, 0, 0}}));
  EXPECT_EQ(s.pair.B2, IntMat3({{4, -3, -2}, {-2, 2, 1}, {1, -1, 0}}));
  for (long a = 0; a <= 3; ++a)
    for (long b = 0; b <= 3; ++b) {
      auto c = sylvester_case(a, b);
      const auto& v = c.candidate.vertices;
      EXPECT_EQ(c.pair.B1 * v[0], v[3]);
      EXPECT_EQ(c.pair.B1 * v[1], v[2]);
      EXPECT_EQ(c.pair.B2 * v[0], v[1]);
      EXPECT_EQ(c.pair.B2 * v[3], v[2]);
      EXPECT_NO_THROW(validate_structure(c.candidate));
      EXPECT_TRUE(disk_failures(c.candidate).empty());
    }
}

TEST(Eigen, FormsAreEigenvectors) {
  auto s = base();
  auto e = eigen_data(s.A);
  for (std::size_t i = 0; i < 3; ++i) {
    // left(lambda) A - lambda left(lambda) vanishes at lambda
    IntPoly lam = IntPoly::monomial(1);
    for (std::size_t k = 0; k < 3; ++k) {
      IntPoly l = IntPoly::constant(s.A(0, k)) * e.left[i][0] + IntPoly::constant(s.A(1, k)) * e.left[i][1] +
                  IntPoly::constant(s.A(2, k)) * e.left[i][2] - lam * e.left[i][k];
      EXPECT_EQ(sign_at(l, e.roots[i]), 0);
      IntPoly r = IntPoly::constant(s.A(k, 0)) * e.right[i][0] + IntPoly::constant(s.A(k, 1)) * e.right[i][1] +
                  IntPoly::constant(s.A(k, 2)) * e.right[i][2] - lam * e.right[i][k];
      EXPECT_EQ(sign_at(r, e.roots[i]), 0);
    }
    EXPECT_NE(e.pairing[i], 0);
  }
}

TEST(Eigen, OrthantIsInvariantUnderPositiveUnits) {
  auto s = base();
  auto e = eigen_data(s.A);
  for (const auto& v : s.candidate.vertices) {
    auto sig = orthant_sign_vector(e, v);
    EXPECT_EQ(orthant_sign_vector(e, s.pair.B1 * v), sig);
    EXPECT_EQ(orthant_sign_vector(e, s.pair.B2 * v), sig);
    EXPECT_EQ(orthant_sign_vector(e, inverse_unimodular(s.pair.B1) * v), sig);
  }
  // all four vertices of the domain lie in one orthant
  auto sig = orthant_sign_vector(e, s.candidate.vertices[0]);
  for (const auto& v : s.candidate.vertices) EXPECT_EQ(orthant_sign_vector(e, v), sig);
  EXPECT_NE(orthant_sign_vector(e, IntVec3(0, 0, -1)), sig);
}

TEST(Eigen, FindOrthantPoint) {
  auto s = base();
  auto e = eigen_data(s.A);
  for (int m = 0; m < 8; ++m) {
    SignVector sig{m & 1 ? 1 : -1, m & 2 ? 1 : -1, m & 4 ? 1 : -1};
    auto p = find_orthant_point(e, sig);
    EXPECT_EQ(orthant_sign_vector(e, p), sig);
  }
}

TEST(SameOrthant, SylvesterSegment) {
  auto s = base();
  // det(x, Xx, X^2x) on the segment from D to B is -t^3 - t^2 + 2t + 1, which has no root in [0, 1]
  EXPECT_TRUE(same_orthant_cubic(s.pair.B1, IntVec3(0, 0, 1), IntVec3(1, 1, 1)));
  EXPECT_TRUE(same_orthant_cubic(s.pair.B1, IntVec3(1, 0, 2), IntVec3(-1, 1, 0)));
  EXPECT_FALSE(same_orthant_cubic(s.pair.B1, IntVec3(0, 0, 1), IntVec3(0, 0, -1)));
  // a point on an eigenline makes the cubic vanish identically
  EXPECT_FALSE(same_orthant_cubic(s.pair.B1, IntVec3(0, 0, 1), IntVec3(0, 0, 1)) &&
               same_orthant_cubic(s.pair.B1, IntVec3(0, 0, 0), IntVec3(0, 0, 1)));
}

TEST(SameOrthant, AgreesWithSignVectors) {
  auto s = base();
  auto e = eigen_data(s.A);
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-4, 4);
  int checked = 0;
  for (int it = 0; it < 300; ++it) {
    IntVec3 p(d(rng), d(rng), d(rng)), q(d(rng), d(rng), d(rng));
    auto sp = orthant_sign_vector(e, p), sq = orthant_sign_vector(e, q);
    if (sp != sq) {
      EXPECT_FALSE(same_orthant_cubic(s.pair.B1, p, q)) << to_string(p) << " " << to_string(q);
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(Sail, SliceNormalAndVertex) {
  auto s = base();
  auto e = eigen_data(s.A);
  auto ref = orthant_of(e, IntVec3(0, 0, 1));
  auto w = find_slice_normal(e, ref.signs);
  for (const auto& v : s.candidate.vertices) EXPECT_GT(dot(w, v), 0);
  // the lowest slice of the orthant along (-1, 1, 1) holds only B
  auto v = find_sail_vertex(e, ref, IntVec3(1, 1, 1), IntVec3(-1, 1, 1));
  EXPECT_EQ(v, IntVec3(0, 0, 1));
  IntVec3 far = s.pair.B1 * (s.pair.B1 * IntVec3(1, 1, 1)) + s.pair.B2 * IntVec3(1, 0, 2);
  auto u = find_sail_vertex(e, ref, far);
  EXPECT_EQ(orthant_sign_vector(e, u), ref.signs);
  EXPECT_LE(dot(w, u), dot(w, far));
  EXPECT_THROW(find_sail_vertex(e, ref, IntVec3(0, 0, -1)), DomainError);
}

TEST(Sail, ApproximationRecoversDomain) {
  auto s = base();
  auto seeds = seed_hull(IntVec3(0, 0, 1), s.pair);
  ASSERT_FALSE(seeds.empty());
  auto approx = special_approximation(seeds, s.pair, 4, ExponentRange::symmetric);
  std::size_t trusted = 0;
  for (bool t : approx.trusted) trusted += t;
  EXPECT_GT(trusted, 0u);
  auto cls = orbit_classes(approx.mesh, s.pair);
  auto cand = extract_candidate(approx, cls, s.pair);
  EXPECT_TRUE(disk_failures(cand).empty());
  EXPECT_EQ(cand.p2(), 2u);
  EXPECT_EQ(cand.p1(), 3u);
  EXPECT_EQ(cand.p0(), 1u);
}
