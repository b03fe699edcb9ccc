#pragma once

#include <array>
#include <initializer_list>
#include <ostream>
#include <string>

#include "sailforge/exact/numbers.hpp"

namespace sailforge {

/// Integer point of Z^3.
struct IntVec3 {
  std::array<Int, 3> c{};

  IntVec3() = default;
  IntVec3(Int x, Int y, Int z) : c{std::move(x), std::move(y), std::move(z)} {}

  const Int& operator[](std::size_t i) const { return c[i]; }
  Int& operator[](std::size_t i) { return c[i]; }

  bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0; }

  friend bool operator==(const IntVec3& a, const IntVec3& b) { return a.c == b.c; }
  friend bool operator!=(const IntVec3& a, const IntVec3& b) { return !(a == b); }
  /// Lexicographic order.
  friend bool operator<(const IntVec3& a, const IntVec3& b) { return a.c < b.c; }

  friend IntVec3 operator+(const IntVec3& a, const IntVec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
  }
  friend IntVec3 operator-(const IntVec3& a, const IntVec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  }
  friend IntVec3 operator-(const IntVec3& a) { return {-a[0], -a[1], -a[2]}; }
  friend IntVec3 operator*(const Int& k, const IntVec3& a) { return {k * a[0], k * a[1], k * a[2]}; }

  friend std::ostream& operator<<(std::ostream& os, const IntVec3& v) {
    return os << '(' << v[0] << ',' << v[1] << ',' << v[2] << ')';
  }
};

inline std::string to_string(const IntVec3& v) {
  return "(" + v[0].str() + "," + v[1].str() + "," + v[2].str() + ")";
}

inline Int dot(const IntVec3& a, const IntVec3& b) {
  count_ops(5);
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline IntVec3 cross(const IntVec3& u, const IntVec3& v) {
  count_ops(9);
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

/// det of the matrix with columns u, v, w.
inline Int det3(const IntVec3& u, const IntVec3& v, const IntVec3& w) { return dot(u, cross(v, w)); }

/// Integer length of v: gcd of the absolute coordinates.
inline Int ivec_content(const IntVec3& v) {
  if (v.is_zero()) throw DomainError("integer length of the zero vector is undefined");
  count_ops(2);
  return gcd(gcd(abs(v[0]), abs(v[1])), abs(v[2]));
}

inline IntVec3 primitive(const IntVec3& v) {
  Int g = ivec_content(v);
  return {v[0] / g, v[1] / g, v[2] / g};
}

/// 3x3 integer matrix, row-major.
struct IntMat3 {
  std::array<Int, 9> e{};

  IntMat3() = default;
  IntMat3(std::initializer_list<std::initializer_list<long long>> rows) {
    std::size_t r = 0;
    for (const auto& row : rows) {
      std::size_t col = 0;
      for (long long v : row) e[3 * r + col++] = v;
      ++r;
    }
  }

  static IntMat3 identity() {
    IntMat3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1;
    return m;
  }

  static IntMat3 from_rows(const IntVec3& r0, const IntVec3& r1, const IntVec3& r2) {
    IntMat3 m;
    for (std::size_t j = 0; j < 3; ++j) {
      m(0, j) = r0[j];
      m(1, j) = r1[j];
      m(2, j) = r2[j];
    }
    return m;
  }

  static IntMat3 from_columns(const IntVec3& c0, const IntVec3& c1, const IntVec3& c2) {
    return from_rows(c0, c1, c2).transpose();
  }

  const Int& operator()(std::size_t r, std::size_t c) const { return e[3 * r + c]; }
  Int& operator()(std::size_t r, std::size_t c) { return e[3 * r + c]; }

  IntVec3 row(std::size_t r) const { return {e[3 * r], e[3 * r + 1], e[3 * r + 2]}; }
  IntVec3 column(std::size_t c) const { return {e[c], e[3 + c], e[6 + c]}; }

  IntMat3 transpose() const {
    IntMat3 t;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
    return t;
  }

  Int trace() const { return e[0] + e[4] + e[8]; }

  friend bool operator==(const IntMat3& a, const IntMat3& b) { return a.e == b.e; }
  friend bool operator!=(const IntMat3& a, const IntMat3& b) { return !(a == b); }
  friend bool operator<(const IntMat3& a, const IntMat3& b) { return a.e < b.e; }

  friend IntMat3 operator+(const IntMat3& a, const IntMat3& b) {
    IntMat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.e[i] = a.e[i] + b.e[i];
    return r;
  }
  friend IntMat3 operator-(const IntMat3& a, const IntMat3& b) {
    IntMat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.e[i] = a.e[i] - b.e[i];
    return r;
  }
  friend IntMat3 operator*(const Int& k, const IntMat3& a) {
    IntMat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.e[i] = k * a.e[i];
    return r;
  }
  friend IntMat3 operator*(const IntMat3& a, const IntMat3& b) {
    count_ops(45);
    IntMat3 r;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return r;
  }
  friend IntVec3 operator*(const IntMat3& a, const IntVec3& v) {
    count_ops(15);
    return {a(0, 0) * v[0] + a(0, 1) * v[1] + a(0, 2) * v[2],
            a(1, 0) * v[0] + a(1, 1) * v[1] + a(1, 2) * v[2],
            a(2, 0) * v[0] + a(2, 1) * v[1] + a(2, 2) * v[2]};
  }

  friend std::ostream& operator<<(std::ostream& os, const IntMat3& m) {
    os << '[';
    for (std::size_t r = 0; r < 3; ++r) {
      if (r) os << ';';
      os << m(r, 0) << ',' << m(r, 1) << ',' << m(r, 2);
    }
    return os << ']';
  }
};

inline Int det3(const IntMat3& m) { return det3(m.column(0), m.column(1), m.column(2)); }

inline IntMat3 adjugate(const IntMat3& m) {
  count_ops(27);
  IntMat3 a;
  auto cof = [&](std::size_t r, std::size_t c) {
    std::size_t r0 = (r + 1) % 3, r1 = (r + 2) % 3, c0 = (c + 1) % 3, c1 = (c + 2) % 3;
    return Int(m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0));
  };
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) a(c, r) = cof(r, c);
  return a;
}

/// Inverse of a matrix with determinant +-1.
inline IntMat3 inverse_unimodular(const IntMat3& m) {
  Int d = det3(m);
  if (d == 1) return adjugate(m);
  if (d == -1) return Int(-1) * adjugate(m);
  throw DomainError("matrix is not unimodular (det = " + d.str() + ")");
}

/// m^k for any integer k; negative powers need |det m| = 1.
inline IntMat3 power(const IntMat3& m, long k) {
  IntMat3 base = k < 0 ? inverse_unimodular(m) : m;
  unsigned long n = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  IntMat3 result = IntMat3::identity();
  while (n) {
    if (n & 1UL) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

/// Rational point, used where exact intersections leave the lattice.
using RatVec3 = std::array<Rat, 3>;

inline RatVec3 to_rat(const IntVec3& v) { return {Rat(v[0]), Rat(v[1]), Rat(v[2])}; }

inline Rat dot(const IntVec3& a, const RatVec3& b) {
  count_ops(5);
  return Rat(a[0]) * b[0] + Rat(a[1]) * b[1] + Rat(a[2]) * b[2];
}

}  // namespace sailforge
