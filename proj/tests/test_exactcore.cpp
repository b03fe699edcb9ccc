#include <gtest/gtest.h>

#include <random>

#include "sailforge/exact/hull.hpp"
#include "sailforge/exact/interval.hpp"
#include "sailforge/exact/lattice.hpp"
#include "sailforge/exact/poly.hpp"

using namespace sailforge;

TEST(Vec, DeterminantsOfSylvesterTriples) {
  IntVec3 A(1, 0, 2), B(0, 0, 1), C(-1, 1, 0), D(1, 1, 1);
  EXPECT_EQ(det3(A, B, D), -1);
  EXPECT_EQ(det3(B, D, C), 2);
  EXPECT_EQ(det3(IntVec3(1, 0, 0), IntVec3(0, 1, 0), IntVec3(0, 0, 1)), 1);
  EXPECT_EQ(cross(IntVec3(1, 1, 0), IntVec3(-1, 1, -1)), IntVec3(-1, 1, 2));
  EXPECT_EQ(ivec_content(IntVec3(1, -1, -1)), 1);
  EXPECT_EQ(ivec_content(IntVec3(4, -6, 10)), 2);
  EXPECT_THROW(ivec_content(IntVec3(0, 0, 0)), DomainError);
}

TEST(Vec, MatrixPowersAndInverse) {
  IntMat3 a{{0, 1, 0}, {0, 0, 1}, {1, 1, -2}};
  EXPECT_EQ(det3(a), 1);
  IntMat3 a2{{0, 0, 1}, {1, 1, -2}, {-2, -1, 5}};
  EXPECT_EQ(power(a, 2), a2);
  EXPECT_EQ(power(a, -1) * a, IntMat3::identity());
  EXPECT_EQ(power(a, -3) * power(a, 3), IntMat3::identity());
  EXPECT_THROW(inverse_unimodular(IntMat3{{2, 0, 0}, {0, 1, 0}, {0, 0, 1}}), DomainError);
}

TEST(Numbers, FloorCeilAndParse) {
  EXPECT_EQ(floor(Rat(-7, 2)), -4);
  EXPECT_EQ(ceil(Rat(-7, 2)), -3);
  EXPECT_EQ(floor(Rat(7, 2)), 3);
  EXPECT_EQ(ceil(Rat(6, 2)), 3);
  EXPECT_EQ(parse_int("-123456789012345678901234567890"), Int("-123456789012345678901234567890"));
  EXPECT_THROW(parse_int("12a"), InputError);
  EXPECT_THROW(parse_int("-"), InputError);
}

TEST(Poly, CharacteristicPolynomialRoots) {
  IntPoly chi{-1, -1, 2, 1};  // l^3 + 2l^2 - l - 1
  auto roots = isolate_real_roots(chi);
  ASSERT_EQ(roots.size(), 3u);
  for (auto& r : roots) r.refine_to(Rat(1, 100));
  EXPECT_GE(roots[0].lo, -3);
  EXPECT_LE(roots[0].hi, -1);
  EXPECT_GE(roots[1].lo, -1);
  EXPECT_LE(roots[1].hi, 0);
  EXPECT_GE(roots[2].lo, 0);
  EXPECT_LE(roots[2].hi, 1);
  roots[2].refine_to(Rat(1, 1000000));
  EXPECT_NEAR(roots[2].approx(), 0.8019377358, 1e-6);
  EXPECT_EQ(sign_at(IntPoly{-1, 0, 1}, roots[2]), -1);
  EXPECT_EQ(sign_at(chi, roots[0]), 0);
}

TEST(Poly, RepeatedAndRationalRoots) {
  IntPoly p = IntPoly{-1, 1} * IntPoly{-1, 1} * IntPoly{2, 1};  // (x-1)^2 (x+2)
  auto roots = isolate_real_roots(p);
  ASSERT_EQ(roots.size(), 2u);
  auto layers = multiplicity_layers(p);
  ASSERT_EQ(layers.size(), 2u);
  EXPECT_EQ(layers[1], (IntPoly{-1, 1}));
  EXPECT_EQ(squarefree_part(p), (IntPoly{-2, 1, 1}));
  IntPoly q{-1, 2};  // 2x - 1
  auto r = isolate_real_roots(q);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r[0].is_exact());
  EXPECT_EQ(r[0].lo, Rat(1, 2));
}

TEST(Poly, SturmCountMatchesIsolation) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    IntPoly p{d(rng), d(rng), d(rng), 1};
    IntPoly sf = squarefree_part(p);
    SturmChain chain(sf);
    Int b = cauchy_bound(sf);
    auto roots = isolate_real_roots(p);
    EXPECT_EQ(chain.count(Rat(-b), Rat(b)), static_cast<int>(roots.size()));
    for (const auto& r : roots) {
      EXPECT_LE(sf.sign_at(r.lo) * sf.sign_at(r.hi), 0);
    }
  }
}

TEST(Poly, CubicRootsInUnitSegment) {
  EXPECT_EQ(cubic_roots_in_unit_segment(IntPoly{1, 2, -1, -1}), 0);  // -t^3 - t^2 + 2t + 1
  EXPECT_EQ(cubic_roots_in_unit_segment(IntPoly{-1, 2}), 1);
  EXPECT_EQ(cubic_roots_in_unit_segment(IntPoly{0, -1, 1}), 2);  // t(t-1)
  EXPECT_EQ(cubic_roots_in_unit_segment(IntPoly{3}), 0);
}

TEST(Interval, LogEnclosures) {
  Rat tol(1, Int(1) << 60);
  auto l2 = log_enclosure(Rat(2), tol);
  EXPECT_TRUE(l2.contains(Rat(Int("6931471805599453"), Int("10000000000000000"))) ||
              std::abs(l2.mid() - 0.6931471805599453) < 1e-15);
  EXPECT_LE(l2.width(), tol * 2);
  auto l10 = log_enclosure(Rat(10), tol);
  EXPECT_NEAR(l10.mid(), 2.302585092994046, 1e-14);
  auto l1 = log_enclosure(Rat(1), tol);
  EXPECT_TRUE(l1.contains_zero());
  auto small = log_enclosure(Rat(1, 1000), tol);
  EXPECT_NEAR(small.mid(), -6.907755278982137, 1e-13);
  EXPECT_THROW(log_enclosure(Rat(0), tol), DomainError);
}

TEST(Hull, CubeMergesCoplanarFacets) {
  std::vector<IntVec3> pts;
  for (int x = 0; x <= 2; ++x)
    for (int y = 0; y <= 2; ++y)
      for (int z = 0; z <= 2; ++z) pts.emplace_back(x, y, z);
  auto mesh = hull3d(pts);
  EXPECT_EQ(mesh.vertices.size(), 8u);
  ASSERT_EQ(mesh.faces.size(), 6u);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    EXPECT_EQ(mesh.faces[f].size(), 4u);
    for (const auto& p : pts) EXPECT_LE(mesh.planes[f].eval(p), 0);
  }
}

TEST(Hull, TetrahedronOrientation) {
  auto mesh = hull3d({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  ASSERT_EQ(mesh.faces.size(), 4u);
  IntVec3 inside4(1, 1, 1);
  for (std::size_t f = 0; f < 4; ++f) {
    auto p = mesh.face_points(f);
    // counter-clockwise from outside: normal from the cycle agrees with the plane normal
    IntVec3 n = cross(p[1] - p[0], p[2] - p[0]);
    EXPECT_GT(dot(n, mesh.planes[f].normal), 0);
    EXPECT_LT(dot(mesh.planes[f].normal, inside4), 4 * mesh.planes[f].offset);
  }
}

TEST(Hull, DegenerateInputReportsRank) {
  try {
    hull3d({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}});
    FAIL();
  } catch (const DegenerateHull& e) {
    EXPECT_EQ(e.rank(), 1);
  }
  EXPECT_THROW(hull3d({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}), DegenerateHull);
}

TEST(Hull, RandomPointCloudsSatisfyEuler) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<IntVec3> pts;
    for (int i = 0; i < 25; ++i) pts.emplace_back(d(rng), d(rng), d(rng));
    auto mesh = hull3d(pts);
    std::size_t edges2 = 0;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
      edges2 += mesh.faces[f].size();
      for (const auto& p : pts) ASSERT_LE(mesh.planes[f].eval(p), 0);
      for (auto i : mesh.faces[f]) ASSERT_EQ(mesh.planes[f].eval(mesh.vertices[i]), 0);
    }
    long v = static_cast<long>(mesh.vertices.size()), e = static_cast<long>(edges2 / 2),
         f = static_cast<long>(mesh.faces.size());
    EXPECT_EQ(v - e + f, 2);
    // every input point that is not in the convex hull of the others is a vertex
    for (const auto& p : pts) {
      int tight = 0;
      for (const auto& pl : mesh.planes) tight += pl.eval(p) == 0;
      if (tight >= 3) EXPECT_TRUE(std::binary_search(mesh.vertices.begin(), mesh.vertices.end(), p));
    }
  }
}

TEST(Lattice, PointsMatchNaiveEnumeration) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(-3, 3);
  std::uniform_int_distribution<int> b(-5, 12);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Halfspace> hs;
    for (int i = 0; i < 5; ++i) hs.push_back({IntVec3(d(rng), d(rng), d(rng)), Rat(b(rng), 1 + trial % 3)});
    IntVec3 lo(-4, -4, -4), hi(4, 4, 4);
    auto got = lattice_points(hs, lo, hi);
    std::vector<IntVec3> naive;
    for (int x = -4; x <= 4; ++x)
      for (int y = -4; y <= 4; ++y)
        for (int z = -4; z <= 4; ++z) {
          IntVec3 p(x, y, z);
          bool ok = true;
          for (const auto& h : hs) ok = ok && h.contains(p);
          if (ok) naive.push_back(p);
        }
    EXPECT_EQ(got, naive);
  }
}

TEST(Lattice, KernelAndHermiteForm) {
  IntMatrix m{{1, 2, 3}, {2, 4, 6}};
  auto k = integer_kernel(m, 3);
  ASSERT_EQ(k.size(), 2u);
  for (const auto& v : k) EXPECT_EQ(v[0] + 2 * v[1] + 3 * v[2], 0);
  // the kernel of x + 2y + 3z has index 1 in Z^3 intersected with the plane
  IntVec3 c = cross(IntVec3(k[0][0], k[0][1], k[0][2]), IntVec3(k[1][0], k[1][1], k[1][2]));
  EXPECT_EQ(ivec_content(c), 1);
  auto h = hermite_normal_form({{4, 6}, {6, 9}, {2, 3}});
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h[0], (IntRow{2, 3}));
  auto h2 = hermite_normal_form({{2, 1}, {0, 3}, {1, 1}});
  ASSERT_EQ(h2.size(), 2u);
  EXPECT_EQ(h2[0], (IntRow{1, 0}));
  EXPECT_EQ(h2[1], (IntRow{0, 1}));
}
