#pragma once

#include <algorithm>
#include <vector>

#include "sailforge/exact/numbers.hpp"
#include "sailforge/exact/poly.hpp"

namespace sailforge {

/// Closed rational interval [lo, hi].
struct RatInterval {
  Rat lo;
  Rat hi;

  RatInterval() = default;
  RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {}
  explicit RatInterval(const Rat& v) : lo(v), hi(v) {}

  static RatInterval of(const RootInterval& r) { return {r.lo, r.hi}; }

  Rat width() const { return hi - lo; }
  bool contains(const Rat& v) const { return lo <= v && v <= hi; }
  bool contains_zero() const { return lo <= 0 && hi >= 0; }
  bool positive() const { return lo > 0; }
  bool negative() const { return hi < 0; }
  double mid() const { return to_double((lo + hi) / 2); }

  friend RatInterval operator+(const RatInterval& a, const RatInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
  friend RatInterval operator-(const RatInterval& a, const RatInterval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
  friend RatInterval operator-(const RatInterval& a) { return {-a.hi, -a.lo}; }
  friend RatInterval operator*(const RatInterval& a, const RatInterval& b) {
    Rat p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
  }
  friend RatInterval operator*(const Rat& k, const RatInterval& a) {
    return k >= 0 ? RatInterval{k * a.lo, k * a.hi} : RatInterval{k * a.hi, k * a.lo};
  }
  friend RatInterval operator/(const RatInterval& a, const RatInterval& b) {
    if (b.contains_zero()) throw DomainError("interval division by an interval containing zero");
    return a * RatInterval{1 / b.hi, 1 / b.lo};
  }
};

/// Horner evaluation over an interval; encloses the range of p on x.
inline RatInterval eval(const IntPoly& p, const RatInterval& x) {
  RatInterval acc(Rat(0));
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + RatInterval(Rat(*it));
  return acc;
}

inline RatInterval eval(const std::vector<Rat>& coeffs, const RatInterval& x) {
  RatInterval acc(Rat(0));
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + RatInterval(*it);
  return acc;
}

namespace detail {

/// Enclosure of 2*atanh(z) = log((1+z)/(1-z)) for |z| <= 1/2, width <= tol.
inline RatInterval atanh2(const Rat& z, const Rat& tol) {
  Rat z2 = z * z;
  Rat term = z;  // z^(2k+1)
  Rat sum = 0;
  long k = 0;
  while (true) {
    sum += term / (2 * k + 1);
    term *= z2;
    ++k;
    // |tail| <= |z|^(2k+1) / ((2k+1)(1 - z^2)), times 2 below
    Rat tail = (term < 0 ? Rat(-term) : term) / (Rat(2 * k + 1) * (1 - z2));
    if (4 * tail <= tol) {
      return {2 * sum - 2 * tail, 2 * sum + 2 * tail};
    }
  }
}

inline const RatInterval& log2_enclosure() {
  static const RatInterval ln2 = atanh2(Rat(1, 3), Rat(1, Int(1) << 200));
  return ln2;
}

}  // namespace detail

/// Rigorous enclosure of log(x) for rational x > 0, of width about tol.
inline RatInterval log_enclosure(const Rat& x, const Rat& tol) {
  if (x <= 0) throw DomainError("log of a non-positive number");
  long k = 0;
  Rat y = x;
  while (y > Rat(4, 3)) {
    y /= 2;
    ++k;
  }
  while (y < Rat(2, 3)) {
    y *= 2;
    --k;
  }
  Rat z = (y - 1) / (y + 1);  // |z| <= 1/5
  RatInterval r = detail::atanh2(z, tol / 2);
  if (k != 0) r = r + Rat(k) * detail::log2_enclosure();
  return r;
}

/// Enclosure of log over a positive interval.
inline RatInterval log_enclosure(const RatInterval& x, const Rat& tol) {
  if (!x.positive()) throw DomainError("log of an interval that is not strictly positive");
  return {log_enclosure(x.lo, tol).lo, log_enclosure(x.hi, tol).hi};
}

}  // namespace sailforge
