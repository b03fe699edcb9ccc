#pragma once

#include <algorithm>
#include <ostream>
#include <utility>
#include <vector>

#include "sailforge/exact/numbers.hpp"

namespace sailforge {

/// Univariate integer polynomial, coefficients in ascending degree.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }
  IntPoly(std::initializer_list<long long> coeffs) {
    for (long long v : coeffs) c_.emplace_back(v);
    trim();
  }

  static IntPoly constant(Int v) { return IntPoly(std::vector<Int>{std::move(v)}); }
  static IntPoly monomial(std::size_t deg, Int coeff = 1) {
    std::vector<Int> c(deg + 1);
    c[deg] = std::move(coeff);
    return IntPoly(std::move(c));
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Int>& coeffs() const { return c_; }
  Int coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Int(0); }
  const Int& leading() const { return c_.back(); }

  Int eval(const Int& x) const {
    Int acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// Sign of p(x) computed without rational arithmetic.
  int sign_at(const Rat& x) const {
    if (c_.empty()) return 0;
    const Int n = numerator(x);
    const Int d = denominator(x);
    // sum a_i n^i d^(deg-i), d > 0
    Int acc = 0;
    Int dpow = 1;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      acc = acc * n + *it * dpow;
      dpow *= d;
    }
    count_ops(2 * c_.size());
    return acc.sign();
  }

  Rat eval(const Rat& x) const {
    Rat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Rat(*it);
    return acc;
  }

  IntPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Int> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
    return IntPoly(std::move(d));
  }

  Int content() const {
    Int g = 0;
    for (const auto& v : c_) g = gcd(g, abs(v));
    return g;
  }

  /// Divides out the content and makes the leading coefficient positive.
  IntPoly primitive_positive() const {
    if (c_.empty()) return {};
    Int g = content();
    if (leading() < 0) g = -g;
    std::vector<Int> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] / g;
    return IntPoly(std::move(r));
  }

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<Int> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) + b.coeff(i);
    return IntPoly(std::move(r));
  }
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    std::vector<Int> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) - b.coeff(i);
    return IntPoly(std::move(r));
  }
  friend IntPoly operator-(const IntPoly& a) { return IntPoly{} - a; }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Int> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    count_ops(a.c_.size() * b.c_.size());
    return IntPoly(std::move(r));
  }
  friend IntPoly operator*(const Int& k, const IntPoly& a) {
    std::vector<Int> r(a.c_);
    for (auto& v : r) v *= k;
    return IntPoly(std::move(r));
  }

  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const IntPoly& a, const IntPoly& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const IntPoly& p) {
    if (p.is_zero()) return os << "0";
    bool first = true;
    for (int i = p.degree(); i >= 0; --i) {
      const Int& v = p.c_[static_cast<std::size_t>(i)];
      if (v == 0) continue;
      if (!first) os << (v < 0 ? " - " : " + ");
      else if (v < 0) os << "-";
      Int m = abs(v);
      if (m != 1 || i == 0) os << m;
      if (i >= 1) os << "x";
      if (i >= 2) os << "^" << i;
      first = false;
    }
    return os;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Int> c_;
};

/// lc(b)^(deg a - deg b + 1) * a mod b, over the integers.
inline IntPoly pseudo_remainder(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw DomainError("pseudo-remainder by the zero polynomial");
  std::vector<Int> r = a.coeffs();
  const int db = b.degree();
  const Int& lb = b.leading();
  int dr = a.degree();
  int steps = std::max(dr - db + 1, 0);
  while (dr >= db && dr >= 0) {
    Int lr = r[static_cast<std::size_t>(dr)];
    for (auto& v : r) v *= lb;
    for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(dr - db + i)] -= lr * b.coeff(static_cast<std::size_t>(i));
    --steps;
    while (dr >= 0 && r[static_cast<std::size_t>(dr)] == 0) --dr;
    r.resize(static_cast<std::size_t>(dr + 1));
  }
  // complete the power of lc(b) so the multiplier is exactly lc^(deg a - deg b + 1)
  for (; steps > 0; --steps)
    for (auto& v : r) v *= lb;
  return IntPoly(std::move(r));
}

/// Greatest common divisor, primitive with positive leading coefficient.
inline IntPoly gcd(IntPoly a, IntPoly b) {
  if (a.is_zero()) return b.primitive_positive();
  if (b.is_zero()) return a.primitive_positive();
  a = a.primitive_positive();
  b = b.primitive_positive();
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    IntPoly r = pseudo_remainder(a, b);
    a = std::move(b);
    b = r.primitive_positive();
  }
  return a.primitive_positive();
}

/// a / b where b divides a over Q; result primitive, positive leading coefficient.
inline IntPoly divide_exact(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw DomainError("division by the zero polynomial");
  std::vector<Rat> r(a.coeffs().begin(), a.coeffs().end());
  const int db = b.degree();
  const Rat lb(b.leading());
  int dr = a.degree();
  if (dr < db) return {};
  std::vector<Rat> q(static_cast<std::size_t>(dr - db + 1));
  for (int k = dr - db; k >= 0; --k) {
    Rat f = r[static_cast<std::size_t>(k + db)] / lb;
    q[static_cast<std::size_t>(k)] = f;
    for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(k + i)] -= f * Rat(b.coeff(static_cast<std::size_t>(i)));
  }
  for (const auto& v : r)
    if (v != 0) throw DomainError("polynomial division is not exact");
  Int l = 1;
  for (const auto& v : q) l = boost::multiprecision::lcm(l, denominator(v));
  std::vector<Int> qi(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) qi[i] = numerator(q[i] * Rat(l));
  return IntPoly(std::move(qi)).primitive_positive();
}

/// p / gcd(p, p'): same roots, all simple.
inline IntPoly squarefree_part(const IntPoly& p) {
  if (p.degree() <= 0) return p.primitive_positive();
  IntPoly g = gcd(p, p.derivative());
  if (g.degree() == 0) return p.primitive_positive();
  return divide_exact(p, g);
}

/// Factors P_k whose roots are exactly the roots of p of multiplicity >= k.
inline std::vector<IntPoly> multiplicity_layers(const IntPoly& p) {
  std::vector<IntPoly> layers;
  IntPoly cur = p.primitive_positive();
  while (cur.degree() >= 1) {
    IntPoly next = gcd(cur, cur.derivative());
    layers.push_back(next.degree() >= 1 ? divide_exact(cur, next) : cur);
    cur = next;
  }
  return layers;
}

/// Sturm chain of a square-free polynomial; every member is a positive multiple of the classical one.
class SturmChain {
 public:
  explicit SturmChain(const IntPoly& p) {
    if (p.is_zero()) throw DomainError("Sturm chain of the zero polynomial");
    chain_.push_back(p);
    IntPoly d = p.derivative();
    if (d.is_zero()) return;
    chain_.push_back(d);
    while (true) {
      const IntPoly& a = chain_[chain_.size() - 2];
      const IntPoly& b = chain_.back();
      if (b.degree() <= 0) break;
      IntPoly r = pseudo_remainder(a, b);
      if (r.is_zero()) break;
      int delta = a.degree() - b.degree() + 1;
      bool flip = b.leading() < 0 && (delta % 2 == 1);
      Int g = r.content();
      std::vector<Int> cs(r.coeffs());
      for (auto& v : cs) v = (flip ? v : Int(-v)) / g;
      chain_.emplace_back(std::move(cs));
    }
  }

  /// Sign variations at x, zeros skipped.
  int variations(const Rat& x) const {
    int changes = 0;
    int last = 0;
    for (const auto& q : chain_) {
      int s = q.sign_at(x);
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

  /// Number of distinct roots in the half-open interval (a, b].
  int count(const Rat& a, const Rat& b) const { return variations(a) - variations(b); }

  const IntPoly& poly() const { return chain_.front(); }

 private:
  std::vector<IntPoly> chain_;
};

/// Strict bound: every real root x satisfies |x| < cauchy_bound(p).
inline Int cauchy_bound(const IntPoly& p) {
  Int m = 0;
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, abs(p.coeff(static_cast<std::size_t>(i))));
  Int lc = abs(p.leading());
  return 2 + m / lc;
}

/// A real algebraic number: the unique root of a square-free polynomial in [lo, hi].
struct RootInterval {
  IntPoly poly;  // square-free, positive leading coefficient
  Rat lo;
  Rat hi;

  bool is_exact() const { return lo == hi; }
  Rat width() const { return hi - lo; }

  /// One bisection step; keeps the sign change across the interval.
  void refine() {
    if (is_exact()) return;
    Rat mid = (lo + hi) / 2;
    int s = poly.sign_at(mid);
    if (s == 0) {
      lo = hi = mid;
    } else if (s == poly.sign_at(lo)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  void refine_to(const Rat& w) {
    while (!is_exact() && width() > w) refine();
  }

  double approx() const { return to_double((lo + hi) / 2); }
};

/// Isolating intervals for the distinct real roots of p, ascending.
inline std::vector<RootInterval> isolate_real_roots(const IntPoly& p) {
  if (p.is_zero()) throw DomainError("cannot isolate roots of the zero polynomial");
  std::vector<RootInterval> out;
  if (p.degree() == 0) return out;
  IntPoly sf = squarefree_part(p);
  if (sf.degree() == 1) {
    out.push_back({sf, Rat(-sf.coeff(0), sf.coeff(1)), Rat(-sf.coeff(0), sf.coeff(1))});
    return out;
  }
  SturmChain chain(sf);
  Rat bound(cauchy_bound(sf));

  struct Job {
    Rat lo, hi;
  };
  // open-interval root count; hi may itself be a root
  auto open_count = [&](const Rat& lo, const Rat& hi) {
    return chain.count(lo, hi) - (sf.sign_at(hi) == 0 ? 1 : 0);
  };
  std::vector<Job> stack{{-bound, bound}};
  while (!stack.empty()) {
    Job j = stack.back();
    stack.pop_back();
    int n = open_count(j.lo, j.hi);
    if (n == 0) continue;
    bool clean_ends = sf.sign_at(j.lo) != 0 && sf.sign_at(j.hi) != 0;
    if (n == 1 && clean_ends) {
      out.push_back({sf, j.lo, j.hi});
      continue;
    }
    Rat mid = (j.lo + j.hi) / 2;
    if (sf.sign_at(mid) == 0) out.push_back({sf, mid, mid});
    stack.push_back({mid, j.hi});
    stack.push_back({j.lo, mid});
  }
  std::sort(out.begin(), out.end(), [](const RootInterval& a, const RootInterval& b) { return a.lo < b.lo; });
  return out;
}

/// Exact sign of q at the algebraic number alpha.
inline int sign_at(const IntPoly& q, const RootInterval& alpha) {
  if (alpha.is_exact()) return q.sign_at(alpha.lo);
  IntPoly r = pseudo_remainder(q, alpha.poly);  // alpha.poly has positive leading coefficient
  if (r.is_zero()) return 0;
  IntPoly g = gcd(r, alpha.poly);
  if (g.degree() >= 1 && g.sign_at(alpha.lo) != g.sign_at(alpha.hi)) return 0;
  RootInterval a = alpha;
  SturmChain chain(squarefree_part(r));
  while (true) {
    if (a.is_exact()) return r.sign_at(a.lo);
    int slo = r.sign_at(a.lo);
    if (slo != 0 && r.sign_at(a.hi) != 0 && chain.count(a.lo, a.hi) == 0) return slo;
    a.refine();
  }
}

/// Number of distinct real roots of f (degree <= 3) in [0, 1].
inline int cubic_roots_in_unit_segment(const IntPoly& f) {
  if (f.is_zero()) throw DomainError("cubic root count of the zero polynomial");
  if (f.degree() > 3) throw DomainError("expected a polynomial of degree <= 3");
  if (f.degree() == 0) return 0;
  IntPoly sf = squarefree_part(f);
  SturmChain chain(sf);
  return chain.count(Rat(0), Rat(1)) + (sf.sign_at(Rat(0)) == 0 ? 1 : 0);
}

}  // namespace sailforge
