#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "sailforge/exact/vec.hpp"

namespace sailforge {

using IntRow = std::vector<Int>;
using IntMatrix = std::vector<IntRow>;

/// Closed halfspace normal . x <= bound.
struct Halfspace {
  IntVec3 normal;
  Rat bound;

  bool contains(const IntVec3& x) const { return Rat(dot(normal, x)) <= bound; }
};

/// All integer points of the box [lo, hi] satisfying every halfspace, in lexicographic order.
inline std::vector<IntVec3> lattice_points(const std::vector<Halfspace>& hs, const IntVec3& lo, const IntVec3& hi) {
  std::vector<IntVec3> out;
  for (Int x = lo[0]; x <= hi[0]; ++x) {
    for (Int y = lo[1]; y <= hi[1]; ++y) {
      Int zlo = lo[2], zhi = hi[2];
      bool empty = false;
      for (const auto& h : hs) {
        count_ops(4);
        Rat rest = h.bound - Rat(h.normal[0] * x + h.normal[1] * y);
        const Int& nz = h.normal[2];
        if (nz == 0) {
          if (rest < 0) empty = true;
        } else if (nz > 0) {
          Int b = floor(rest / Rat(nz));
          if (b < zhi) zhi = b;
        } else {
          Int b = ceil(rest / Rat(nz));
          if (b > zlo) zlo = b;
        }
        if (empty || zlo > zhi) {
          empty = true;
          break;
        }
      }
      if (empty) continue;
      for (Int z = zlo; z <= zhi; ++z) out.emplace_back(x, y, z);
    }
  }
  return out;
}

/// Row Hermite normal form of the lattice spanned by the rows; zero rows dropped.
/// Pivots are positive and entries above a pivot lie in [0, pivot).
inline IntMatrix hermite_normal_form(IntMatrix rows) {
  if (rows.empty()) return rows;
  const std::size_t n = rows[0].size();
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col]))) best = i;
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        Int q = rows[i][col] / rows[r][col];
        for (std::size_t j = col; j < n; ++j) rows[i][j] -= q * rows[r][j];
        count_ops(n - col);
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (r >= rows.size() || rows[r][col] == 0) continue;
    if (rows[r][col] < 0)
      for (auto& v : rows[r]) v = -v;
    for (std::size_t i = 0; i < r; ++i) {
      Int q = rows[i][col] / rows[r][col];
      if (rows[i][col] - q * rows[r][col] < 0) q -= 1;
      if (q != 0)
        for (std::size_t j = col; j < n; ++j) rows[i][j] -= q * rows[r][j];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

/// Basis (in Hermite normal form) of the integer kernel {x in Z^n : M x = 0}.
inline IntMatrix integer_kernel(const IntMatrix& m, std::size_t n) {
  // columns of [M; I], reduced by unimodular column operations
  std::vector<std::pair<IntRow, IntRow>> cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    cols[j].first.resize(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) cols[j].first[i] = m[i][j];
    cols[j].second.assign(n, Int(0));
    cols[j].second[j] = 1;
  }
  std::vector<std::size_t> active(n);
  for (std::size_t j = 0; j < n; ++j) active[j] = j;
  auto axpy = [](IntRow& a, const Int& q, const IntRow& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= q * b[k];
  };
  for (std::size_t row = 0; row < m.size(); ++row) {
    while (true) {
      std::size_t piv = n;
      for (auto j : active)
        if (cols[j].first[row] != 0 && (piv == n || abs(cols[j].first[row]) < abs(cols[piv].first[row]))) piv = j;
      if (piv == n) break;
      bool done = true;
      for (auto j : active) {
        if (j == piv || cols[j].first[row] == 0) continue;
        Int q = cols[j].first[row] / cols[piv].first[row];
        axpy(cols[j].first, q, cols[piv].first);
        axpy(cols[j].second, q, cols[piv].second);
        count_ops(m.size() + n);
        if (cols[j].first[row] != 0) done = false;
      }
      if (done) {
        active.erase(std::find(active.begin(), active.end(), piv));
        break;
      }
    }
  }
  IntMatrix basis;
  for (auto j : active) basis.push_back(cols[j].second);
  return hermite_normal_form(basis);
}

/// Indices of a maximal set of linearly independent rows, chosen greedily in order.
inline std::vector<std::size_t> independent_rows(const std::vector<std::vector<Rat>>& rows) {
  std::vector<std::vector<Rat>> reduced;
  std::vector<std::size_t> pivots, picked;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<Rat> v = rows[r];
    for (std::size_t k = 0; k < reduced.size(); ++k) {
      if (v[pivots[k]] == 0) continue;
      Rat q = v[pivots[k]] / reduced[k][pivots[k]];
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= q * reduced[k][j];
    }
    auto it = std::find_if(v.begin(), v.end(), [](const Rat& x) { return x != 0; });
    if (it == v.end()) continue;
    pivots.push_back(static_cast<std::size_t>(it - v.begin()));
    reduced.push_back(std::move(v));
    picked.push_back(r);
  }
  return picked;
}

/// Solves the square system m x = b over Q; nullopt if m is singular.
inline std::optional<std::vector<Rat>> solve_rational(std::vector<std::vector<Rat>> m, std::vector<Rat> b) {
  const std::size_t n = m.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(m[p], m[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      Rat q = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] -= q * m[c][j];
      b[r] -= q * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= m[i][i];
  return b;
}

}  // namespace sailforge
