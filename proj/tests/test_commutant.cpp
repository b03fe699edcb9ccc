#include <gtest/gtest.h>

#include <random>

#include "sailforge/commutant.hpp"

using namespace sailforge;

namespace {

IntMat3 sylvester_m1_2() { return IntMat3{{0, 1, 0}, {0, 0, 1}, {1, 1, -2}}; }

Int ball_bound(const IntMat3& a) { return operator_norm(IntMat3::identity()) + operator_norm(a) + operator_norm(a * a); }

// random irreducible hyperbolic operators with entries in [-3, 3] and a small ball radius
std::vector<IntMat3> random_operators(std::size_t count, const Int& max_bound) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> d(-3, 3);
  std::vector<IntMat3> out;
  while (out.size() < count) {
    IntMat3 m;
    for (auto& e : m.e) e = d(rng);
    if (!diagnose_operator(m).ok()) continue;
    if (ball_bound(m) > max_bound) continue;
    out.push_back(m);
  }
  return out;
}

}  // namespace

TEST(Commutant, OperatorNorm) {
  EXPECT_EQ(operator_norm(IntMat3::identity()), 3);
  EXPECT_EQ(operator_norm(sylvester_m1_2()), 6);
  EXPECT_EQ(operator_norm(IntMat3{}), 0);
  EXPECT_EQ(operator_norm(sylvester_m1_2() * sylvester_m1_2()), 13);
}

TEST(Commutant, CharacteristicPolynomialAndDiagnosis) {
  auto a = sylvester_m1_2();
  EXPECT_EQ(char_poly(a), (IntPoly{-1, -1, 2, 1}));
  auto d = diagnose_operator(a);
  EXPECT_TRUE(d.irreducible);
  EXPECT_TRUE(d.hyperbolic);
  EXPECT_EQ(d.det, 1);
  auto diag = diagnose_operator(IntMat3{{2, 0, 0}, {0, 3, 0}, {0, 0, 5}});
  EXPECT_FALSE(diag.irreducible);
  EXPECT_FALSE(diag.ok());
  // x^3 - 2 has one real root
  auto cbrt = diagnose_operator(IntMat3{{0, 1, 0}, {0, 0, 1}, {2, 0, 0}});
  EXPECT_TRUE(cbrt.irreducible);
  EXPECT_FALSE(cbrt.hyperbolic);
  EXPECT_THROW(commutant_lattice(IntMat3::identity()), DomainError);
}

TEST(Commutant, LatticeOfSylvesterOperator) {
  auto a = sylvester_m1_2();
  auto cb = commutant_lattice(a);
  for (const auto& m : cb.basis) EXPECT_EQ(m * a, a * m);
  EXPECT_GE(cb.index_over_za, 1);
  // companion matrices generate their commutant: Z[A] is everything
  EXPECT_EQ(cb.index_over_za, 1);
  EXPECT_EQ(span_hnf({cb.basis[0], cb.basis[1], cb.basis[2]}),
            span_hnf({IntMat3::identity(), a, a * a}));
}

TEST(Commutant, BallOracleSmallCases) {
  auto a = sylvester_m1_2();
  auto zero = enumerate_commutant_ball(a, 0);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0], IntMat3{});
  auto three = enumerate_commutant_ball(a, 3);
  EXPECT_NE(std::find(three.begin(), three.end(), IntMat3::identity()), three.end());
  EXPECT_EQ(ball_bound(a), 22);
  auto ball = enumerate_commutant_ball(a, ball_bound(a));
  for (const auto& m : ball) {
    EXPECT_EQ(m * a, a * m);
    EXPECT_LE(operator_norm(m), 22);
  }
  auto cb = commutant_lattice(a);
  EXPECT_EQ(span_hnf(ball), span_hnf({cb.basis[0], cb.basis[1], cb.basis[2]}));
}

TEST(Commutant, BruteForceEntryBoxAgrees) {
  // every matrix with entries in [-2, 2], checked for commutation in machine integers
  const int a[3][3] = {{0, 1, 0}, {0, 0, 1}, {1, 1, -2}};
  std::vector<IntMat3> found;
  int x[9];
  for (long code = 0; code < 1953125; ++code) {
    long c = code;
    for (int& v : x) v = static_cast<int>(c % 5) - 2, c /= 5;
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i)
      for (int j = 0; j < 3 && ok; ++j) {
        int xa = 0, ax = 0;
        for (int k = 0; k < 3; ++k) xa += x[3 * i + k] * a[k][j], ax += a[i][k] * x[3 * k + j];
        ok = xa == ax;
      }
    if (!ok) continue;
    IntMat3 m;
    for (int e = 0; e < 9; ++e) m.e[e] = x[e];
    found.push_back(m);
  }
  auto cb = commutant_lattice(sylvester_m1_2());
  EXPECT_GT(found.size(), 3u);
  EXPECT_EQ(span_hnf(found), span_hnf({cb.basis[0], cb.basis[1], cb.basis[2]}));
}

TEST(Commutant, KernelMatchesBallOnRandomOperators) {
  auto ops = random_operators(6, Int(45));
  for (const auto& a : ops) {
    auto cb = commutant_lattice(a);
    auto ball = enumerate_commutant_ball(a, ball_bound(a));
    EXPECT_EQ(span_hnf(ball), span_hnf({cb.basis[0], cb.basis[1], cb.basis[2]})) << a;
    // index is the determinant of the coordinates of E, A, A^2
    EXPECT_GE(cb.index_over_za, 1);
  }
}

TEST(Commutant, NonCompanionIndex) {
  // A = 2B + E with B a companion matrix: Z[A] has index 8 in the commutant Z[B]
  IntMat3 b{{0, 1, 0}, {0, 0, 1}, {1, 1, -2}};
  IntMat3 a = Int(2) * b + IntMat3::identity();
  auto cb = commutant_lattice(a);
  EXPECT_EQ(cb.index_over_za, 8);
  EXPECT_EQ(span_hnf({cb.basis[0], cb.basis[1], cb.basis[2]}), span_hnf({IntMat3::identity(), b, b * b}));
}

TEST(Parallelepiped, DocumentedExamples) {
  auto b = parallelepiped_basis({{2, 0}, {0, 2}});
  EXPECT_EQ(b, (IntMatrix{{1, 0}, {0, 1}}));
  auto same = parallelepiped_basis({{1, 0}, {0, 1}});
  EXPECT_EQ(same, (IntMatrix{{1, 0}, {0, 1}}));
  auto skew = parallelepiped_basis({{1, 0}, {1, 2}});
  ASSERT_EQ(skew.size(), 2u);
  EXPECT_EQ(abs(skew[1][1]), 1);
  EXPECT_THROW(parallelepiped_basis({{1, 2}, {2, 4}}), DomainError);
}

TEST(Parallelepiped, OutputIsBasisWithEmptyCells) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int trial = 0; trial < 30; ++trial) {
    IntMatrix g{{d(rng), d(rng), d(rng)}, {d(rng), d(rng), d(rng)}};
    std::vector<std::vector<Rat>> gr;
    for (auto& r : g) gr.emplace_back(r.begin(), r.end());
    if (independent_rows(gr).size() != 2) continue;
    auto b = parallelepiped_basis(g);
    ASSERT_EQ(b.size(), 2u);
    // the saturated lattice of a plane in Z^3: cross product of a basis is primitive
    IntVec3 c = cross(IntVec3(b[0][0], b[0][1], b[0][2]), IntVec3(b[1][0], b[1][1], b[1][2]));
    EXPECT_EQ(ivec_content(c), 1);
    // b[0] is g[0] divided by its content
    IntVec3 g0(g[0][0], g[0][1], g[0][2]);
    EXPECT_EQ(IntVec3(b[0][0], b[0][1], b[0][2]), primitive(g0));
    // b[1] inside P(O, g0, g1) and the cell P(O, b0, b1) has only its vertices as lattice points
    IntVec3 lo, hi;
    for (std::size_t k = 0; k < 3; ++k) {
      for (const auto& v : b) (v[k] < 0 ? lo[k] : hi[k]) += v[k];
    }
    for (Int x = lo[0]; x <= hi[0]; ++x)
      for (Int y = lo[1]; y <= hi[1]; ++y)
        for (Int z = lo[2]; z <= hi[2]; ++z) {
          IntRow p{x, y, z};
          std::array<IntRow, 3> rows{b[0], b[1], IntRow{c[0], c[1], c[2]}};
          auto t = detail::coordinates(rows, p);
          if (t[2] != 0) continue;
          bool in_cell = t[0] >= 0 && t[0] <= 1 && t[1] >= 0 && t[1] <= 1;
          bool vertex = (t[0] == 0 || t[0] == 1) && (t[1] == 0 || t[1] == 1);
          if (in_cell) EXPECT_TRUE(vertex);
        }
  }
}
