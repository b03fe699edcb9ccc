#pragma once

#include <array>
#include <string>
#include <vector>

#include "sailforge/exact/lattice.hpp"
#include "sailforge/exact/poly.hpp"
#include "sailforge/exact/vec.hpp"
#include "sailforge/parallel.hpp"

namespace sailforge {

inline Int operator_norm(const IntMat3& m) {
  Int s = 0;
  for (const auto& v : m.e) s += abs(v);
  return s;
}

/// det(lambda E - M) = lambda^3 - tr lambda^2 + c2 lambda - det.
inline IntPoly char_poly(const IntMat3& m) {
  Int c2 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) -
           m(1, 2) * m(2, 1);
  return IntPoly(std::vector<Int>{-det3(m), c2, -m.trace(), Int(1)});
}

/// Integer divisors of |n| (n != 0), positive only.
inline std::vector<Int> positive_divisors(const Int& n) {
  Int a = abs(n);
  std::vector<Int> small, large;
  for (Int d = 1; d * d <= a; ++d) {
    if (a % d != 0) continue;
    small.push_back(d);
    if (d * d != a) large.push_back(a / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

struct OperatorDiagnosis {
  Int det;
  IntPoly chi;
  bool irreducible = false;
  bool hyperbolic = false;
  std::string message;

  bool ok() const { return irreducible && hyperbolic; }
};

/// Irreducibility of the characteristic cubic over Q and reality/distinctness of its roots.
inline OperatorDiagnosis diagnose_operator(const IntMat3& a) {
  OperatorDiagnosis d;
  d.det = det3(a);
  d.chi = char_poly(a);
  const Int& c0 = d.chi.coeff(0);
  if (c0 == 0) {
    d.message = "characteristic polynomial has the root 0";
  } else {
    d.irreducible = true;
    for (const auto& q : positive_divisors(c0)) {
      for (const Int& r : {q, Int(-q)}) {
        if (d.chi.eval(r) == 0) {
          d.irreducible = false;
          d.message = "characteristic polynomial has the rational root " + r.str();
          break;
        }
      }
      if (!d.irreducible) break;
    }
  }
  auto roots = isolate_real_roots(d.chi);
  d.hyperbolic = roots.size() == 3 && squarefree_part(d.chi).degree() == 3;
  if (!d.hyperbolic && d.message.empty())
    d.message = "characteristic polynomial has " + std::to_string(roots.size()) + " distinct real roots, expected 3";
  else if (!d.hyperbolic)
    d.message += "; only " + std::to_string(roots.size()) + " distinct real roots";
  return d;
}

inline void require_irreducible_hyperbolic(const IntMat3& a) {
  auto d = diagnose_operator(a);
  if (!d.ok()) throw DomainError("operator is not irreducible hyperbolic: " + d.message);
}

struct CommutantBasis {
  std::array<IntMat3, 3> basis;
  Int index_over_za;
};

namespace detail {

inline IntRow flatten(const IntMat3& m) { return IntRow(m.e.begin(), m.e.end()); }

inline IntMat3 unflatten(const IntRow& r) {
  IntMat3 m;
  for (std::size_t i = 0; i < 9; ++i) m.e[i] = r[i];
  return m;
}

/// Coordinates of v in the span of three rows; throws if v is outside the rational span.
inline std::array<Rat, 3> coordinates(const std::array<IntRow, 3>& rows, const IntRow& v) {
  std::vector<std::vector<Rat>> cols(v.size(), std::vector<Rat>(3));
  for (std::size_t j = 0; j < v.size(); ++j)
    for (std::size_t i = 0; i < 3; ++i) cols[j][i] = rows[i][j];
  auto pick = independent_rows(cols);
  if (pick.size() != 3) throw DomainError("rows are linearly dependent");
  std::vector<std::vector<Rat>> m;
  std::vector<Rat> rhs;
  for (auto j : pick) {
    m.push_back(cols[j]);
    rhs.push_back(Rat(v[j]));
  }
  auto c = solve_rational(m, rhs);
  for (std::size_t j = 0; j < v.size(); ++j) {
    Rat s = (*c)[0] * Rat(rows[0][j]) + (*c)[1] * Rat(rows[1][j]) + (*c)[2] * Rat(rows[2][j]);
    if (s != Rat(v[j])) throw DomainError("vector is outside the span");
  }
  return {(*c)[0], (*c)[1], (*c)[2]};
}

inline Rat det3(const std::array<std::array<Rat, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace detail

/// Z-basis of the ring of integer matrices commuting with A, from the kernel of X -> XA - AX.
inline CommutantBasis commutant_lattice(const IntMat3& a) {
  require_irreducible_hyperbolic(a);
  IntMatrix map(9, IntRow(9, Int(0)));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t q = 0; q < 3; ++q) {
          Int c = 0;
          if (p == i) c += a(q, j);
          if (q == j) c -= a(i, p);
          map[3 * i + j][3 * p + q] = c;
        }
  auto kernel = integer_kernel(map, 9);
  if (kernel.size() != 3)
    throw DomainError("commutant has rank " + std::to_string(kernel.size()) + ", expected 3");
  CommutantBasis out;
  std::array<IntRow, 3> rows{kernel[0], kernel[1], kernel[2]};
  for (std::size_t i = 0; i < 3; ++i) out.basis[i] = detail::unflatten(rows[i]);
  std::array<std::array<Rat, 3>, 3> coords{
      detail::coordinates(rows, detail::flatten(IntMat3::identity())), detail::coordinates(rows, detail::flatten(a)),
      detail::coordinates(rows, detail::flatten(a * a))};
  Rat d = detail::det3(coords);
  if (denominator(d) != 1) throw DomainError("E, A, A^2 are not integral in the commutant basis");
  out.index_over_za = abs(numerator(d));
  return out;
}

/// All integer matrices of norm <= N commuting with A. Every such matrix is a rational
/// combination of E, A, A^2, so three suitably chosen entries determine it.
inline std::vector<IntMat3> enumerate_commutant_ball(const IntMat3& a, const Int& n) {
  if (n < 0) throw DomainError("ball radius must be non-negative");
  require_irreducible_hyperbolic(a);
  const std::array<IntMat3, 3> pw{IntMat3::identity(), a, a * a};
  std::array<std::size_t, 3> pos{};
  std::array<std::array<Rat, 3>, 3> sub{};
  bool found = false;
  for (std::size_t p0 = 0; p0 < 9 && !found; ++p0)
    for (std::size_t p1 = p0 + 1; p1 < 9 && !found; ++p1)
      for (std::size_t p2 = p1 + 1; p2 < 9 && !found; ++p2) {
        pos = {p0, p1, p2};
        for (std::size_t r = 0; r < 3; ++r)
          for (std::size_t k = 0; k < 3; ++k) sub[r][k] = Rat(pw[k].e[pos[r]]);
        found = detail::det3(sub) != 0;
      }
  // coefficient vectors (in E, A, A^2) for unit values of the determined entries
  std::vector<std::vector<Rat>> sys(3, std::vector<Rat>(3));
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t k = 0; k < 3; ++k) sys[r][k] = sub[r][k];
  std::array<std::array<Rat, 3>, 3> inv{};
  for (std::size_t u = 0; u < 3; ++u) {
    std::vector<Rat> rhs(3, Rat(0));
    rhs[u] = 1;
    auto c = *solve_rational(sys, rhs);
    for (std::size_t k = 0; k < 3; ++k) inv[k][u] = c[k];
  }
  // entries = (W t) / den with W integral
  Int den = 1;
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t u = 0; u < 3; ++u) den = boost::multiprecision::lcm(den, denominator(inv[k][u]));
  std::array<std::array<Int, 3>, 9> w{};
  for (std::size_t e = 0; e < 9; ++e)
    for (std::size_t u = 0; u < 3; ++u) {
      Rat s = 0;
      for (std::size_t k = 0; k < 3; ++k) s += Rat(pw[k].e[e]) * inv[k][u];
      w[e][u] = numerator(s * den);
    }

  const long nn = n.convert_to<long>();
  auto slab = [&](std::size_t idx) {
    std::vector<IntMat3> found_here;
    const Int t0 = static_cast<long>(idx) - nn;
    long rem = nn - std::labs(static_cast<long>(idx) - nn);
    for (long t1 = -rem; t1 <= rem; ++t1) {
      long rem2 = rem - std::labs(t1);
      for (long t2 = -rem2; t2 <= rem2; ++t2) {
        IntMat3 m;
        bool integral = true;
        for (std::size_t e = 0; e < 9 && integral; ++e) {
          Int v = w[e][0] * t0 + w[e][1] * t1 + w[e][2] * t2;
          count_ops(3);
          if (v % den != 0) integral = false;
          else m.e[e] = v / den;
        }
        if (integral && operator_norm(m) <= n && m * a == a * m) found_here.push_back(m);
      }
    }
    return found_here;
  };
  auto parts = parallel_map<std::vector<IntMat3>>(static_cast<std::size_t>(2 * nn + 1), slab);
  std::vector<IntMat3> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end());
  return out;
}

/// Row HNF of the Z-span of a list of matrices (flattened).
inline IntMatrix span_hnf(const std::vector<IntMat3>& ms) {
  IntMatrix rows;
  for (const auto& m : ms) rows.push_back(detail::flatten(m));
  return hermite_normal_form(rows);
}

/// Basis of the integer lattice in span(gens) with the i-th vector in P(O, g_1..g_i).
/// Among admissible points with the least positive coefficient on g_i, the
/// lexicographically smallest is taken.
inline IntMatrix parallelepiped_basis(const IntMatrix& gens) {
  if (gens.empty()) return {};
  const std::size_t n = gens[0].size();
  {
    std::vector<std::vector<Rat>> rows;
    for (const auto& g : gens) rows.emplace_back(g.begin(), g.end());
    if (independent_rows(rows).size() != gens.size()) throw DomainError("generators are linearly dependent");
  }
  IntMatrix out;
  for (std::size_t i = 1; i <= gens.size(); ++i) {
    // coordinates that determine a point of span(g_1..g_i)
    std::vector<std::vector<Rat>> coord_rows(n, std::vector<Rat>(i));
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t j = 0; j < i; ++j) coord_rows[c][j] = gens[j][c];
    auto pivots = independent_rows(coord_rows);
    std::vector<std::vector<Rat>> sys;
    for (auto c : pivots) sys.push_back(coord_rows[c]);
    std::vector<Int> lo(i), hi(i);
    for (std::size_t k = 0; k < i; ++k) {
      for (std::size_t j = 0; j < i; ++j) {
        const Int& v = gens[j][pivots[k]];
        if (v < 0) lo[k] += v;
        else hi[k] += v;
      }
    }
    std::vector<Int> cur = lo;
    Rat best_alpha = -1;
    IntRow best;
    while (true) {
      std::vector<Rat> rhs(cur.begin(), cur.end());
      auto t = *solve_rational(sys, rhs);
      bool inside = std::all_of(t.begin(), t.end(), [](const Rat& x) { return x >= 0 && x <= 1; });
      if (inside && t[i - 1] > 0) {
        IntRow x(n);
        bool integral = true;
        for (std::size_t c = 0; c < n && integral; ++c) {
          Rat s = 0;
          for (std::size_t j = 0; j < i; ++j) s += t[j] * Rat(gens[j][c]);
          if (denominator(s) != 1) integral = false;
          else x[c] = numerator(s);
        }
        if (integral && (best_alpha < 0 || t[i - 1] < best_alpha || (t[i - 1] == best_alpha && x < best))) {
          best_alpha = t[i - 1];
          best = x;
        }
      }
      std::size_t k = 0;
      while (k < i && cur[k] == hi[k]) cur[k] = lo[k], ++k;
      if (k == i) break;
      ++cur[k];
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace sailforge
