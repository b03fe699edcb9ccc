#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "sailforge/commutant.hpp"
#include "sailforge/exact/interval.hpp"
#include "sailforge/parallel.hpp"

namespace sailforge {

enum class Provenance { searched, user };

struct DirichletPair {
  IntMat3 B1;
  IntMat3 B2;
  Provenance provenance = Provenance::user;
  Int search_bound = 0;
};

/// True iff every root of p (counted with multiplicity) is real and positive, and there are deg p of them.
inline bool all_roots_real_positive(const IntPoly& p) {
  int total = 0;
  for (const auto& layer : multiplicity_layers(p)) {
    for (auto r : isolate_real_roots(layer)) {
      while (!r.is_exact() && r.lo <= 0 && r.hi >= 0) r.refine();
      if (r.is_exact() ? r.lo <= 0 : r.hi < 0) return false;
      ++total;
    }
  }
  return total == p.degree();
}

/// det B = 1, BA = AB, and all eigenvalues of B are positive reals.
inline bool is_positive_unit(const IntMat3& b, const IntMat3& a) {
  if (det3(b) != 1) return false;
  if (b * a != a * b) return false;
  return all_roots_real_positive(char_poly(b));
}

/// Units p0 E + p1 A + p2 A^2 with |p_i| <= bound, plus their inverses; sorted by norm, then entries.
inline std::vector<IntMat3> unit_search(const IntMat3& a, long bound) {
  if (bound < 1) throw DomainError("coefficient bound must be at least 1");
  require_irreducible_hyperbolic(a);
  const IntMat3 a2 = a * a;
  const std::size_t side = static_cast<std::size_t>(2 * bound + 1);
  auto slab = [&](std::size_t idx) {
    std::vector<IntMat3> found;
    Int p0 = static_cast<long>(idx) - bound;
    for (long p1 = -bound; p1 <= bound; ++p1)
      for (long p2 = -bound; p2 <= bound; ++p2) {
        IntMat3 b = p0 * IntMat3::identity() + Int(p1) * a + Int(p2) * a2;
        if (det3(b) != 1) continue;
        if (!all_roots_real_positive(char_poly(b))) continue;
        found.push_back(b);
        found.push_back(adjugate(b));
      }
    return found;
  };
  std::vector<IntMat3> out;
  for (auto& part : parallel_map<std::vector<IntMat3>>(side, slab)) out.insert(out.end(), part.begin(), part.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const IntMat3& x, const IntMat3& y) { return operator_norm(x) < operator_norm(y); });
  return out;
}

/// Rational c with B = c0 E + c1 A + c2 A^2; throws if B is not in Q[A].
inline std::array<Rat, 3> coordinates_in_powers(const IntMat3& b, const IntMat3& a) {
  std::array<IntRow, 3> rows{detail::flatten(IntMat3::identity()), detail::flatten(a), detail::flatten(a * a)};
  return detail::coordinates(rows, detail::flatten(b));
}

/// Enclosures of (log mu_2, log mu_3), where mu_i is the eigenvalue of B on the eigenline of the
/// i-th smallest eigenvalue of A. Each enclosure has width <= width.
inline std::pair<RatInterval, RatInterval> certified_log_vector(const IntMat3& b, const IntMat3& a, const Rat& width) {
  if (!is_positive_unit(b, a)) throw DomainError("log vector requires a positive unit commuting with A");
  auto c = coordinates_in_powers(b, a);
  std::vector<Rat> p(c.begin(), c.end());
  auto roots = isolate_real_roots(char_poly(a));
  auto enclose = [&](RootInterval r) {
    Rat delta = width;
    while (true) {
      r.refine_to(delta);
      RatInterval mu = eval(p, RatInterval::of(r));
      if (mu.positive()) {
        RatInterval l = log_enclosure(mu, width / 4);
        if (l.width() <= width) return l;
      }
      delta /= 16;
    }
  };
  return {enclose(roots[1]), enclose(roots[2])};
}

enum class Independence { independent, dependent, indeterminate };

inline const char* to_string(Independence v) {
  switch (v) {
    case Independence::independent: return "independent";
    case Independence::dependent: return "dependent";
    default: return "indeterminate";
  }
}

/// Relation scan B1^n B2^m = E for 0 < max(|n|,|m|) <= depth, then a certified rank-2 test on
/// log vectors at widths down to 1e-12.
inline Independence independence(const IntMat3& b1, const IntMat3& b2, const IntMat3& a, long depth = 8) {
  std::vector<IntMat3> p1, p2;
  for (long k = -depth; k <= depth; ++k) {
    p1.push_back(power(b1, k));
    p2.push_back(power(b2, k));
  }
  for (long n = -depth; n <= depth; ++n)
    for (long m = -depth; m <= depth; ++m) {
      if (n == 0 && m == 0) continue;
      if (p1[n + depth] * p2[m + depth] == IntMat3::identity()) return Independence::dependent;
    }
  for (int e = 3; e <= 12; e += 3) {
    Rat w(1, boost::multiprecision::pow(Int(10), e));
    auto [x1, y1] = certified_log_vector(b1, a, w);
    auto [x2, y2] = certified_log_vector(b2, a, w);
    RatInterval det = x1 * y2 - y1 * x2;
    if (!det.contains_zero()) return Independence::independent;
  }
  return Independence::indeterminate;
}

/// Independent pair of minimal total norm; candidates keep their relative order in the pair.
inline DirichletPair select_pair(const std::vector<IntMat3>& candidates, const IntMat3& a, const Int& bound = 0) {
  if (candidates.empty()) throw DomainError("no unit candidates");
  struct Pair {
    Int norm;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i] == IntMat3::identity()) continue;
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      if (candidates[j] == IntMat3::identity()) continue;
      pairs.push_back({operator_norm(candidates[i]) + operator_norm(candidates[j]), i, j});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.norm < y.norm; });
  for (const auto& pr : pairs) {
    if (independence(candidates[pr.i], candidates[pr.j], a) == Independence::independent)
      return {candidates[pr.i], candidates[pr.j], Provenance::searched, bound};
  }
  throw DomainError("no independent pair found - raise coeffBound or supply generators");
}

/// Validates user-supplied generators.
inline DirichletPair make_user_pair(const IntMat3& a, const IntMat3& b1, const IntMat3& b2) {
  if (!is_positive_unit(b1, a)) throw DomainError("B1 is not a positive unit commuting with A");
  if (!is_positive_unit(b2, a)) throw DomainError("B2 is not a positive unit commuting with A");
  auto ind = independence(b1, b2, a);
  if (ind != Independence::independent)
    throw DomainError(std::string("generators are not certified independent (") + to_string(ind) + ")");
  return {b1, b2, Provenance::user, 0};
}

}  // namespace sailforge
