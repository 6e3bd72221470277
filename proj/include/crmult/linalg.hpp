#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "crmult/jet.hpp"

namespace crmult {

using JetMatrix = std::vector<std::vector<Jet>>;
using ScalarMatrix = std::vector<std::vector<GaussianRational>>;

/// Determinant by cofactor (Laplace) expansion along the rows, memoized on
/// the set of columns still available. Exact over the jet ring.
inline Jet determinant(const JetMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) throw Error(Errc::SizeMismatch, "empty matrix");
  if (n > 20) throw Error(Errc::SizeMismatch, "matrix too large for cofactor expansion");
  for (const auto& row : m)
    if (row.size() != n) throw Error(Errc::SizeMismatch, "determinant of a non-square matrix");
  int order = std::numeric_limits<int>::max();
  for (const auto& row : m)
    for (const auto& e : row) order = std::min(order, e.order());
  const VarsPtr& vars = m[0][0].vars_ptr();

  std::unordered_map<std::uint32_t, Jet> memo;
  // Minor on rows [row, n) and the columns in `mask`.
  auto minor = [&](auto&& self, std::size_t row, std::uint32_t mask) -> Jet {
    if (row == n) return Jet::constant(vars, order, 1);
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    Jet acc(vars, order);
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(mask & (1u << c))) continue;
      const Jet& e = m[row][c];
      if (!e.is_zero()) {
        Jet t = e * self(self, row + 1, mask & ~(1u << c));
        if (sign > 0)
          acc += t;
        else
          acc -= t;
      }
      sign = -sign;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  return minor(minor, 0, (n == 32 ? 0xffffffffu : ((1u << n) - 1)));
}

/// Inverse by Gauss-Jordan elimination pivoting on entries that are units
/// (nonzero constant term). Throws NotAUnit if the constant matrix is singular.
inline JetMatrix inverse(const JetMatrix& m) {
  const std::size_t n = m.size();
  const VarsPtr& vars = m.at(0).at(0).vars_ptr();
  int order = std::numeric_limits<int>::max();
  for (const auto& row : m)
    for (const auto& e : row) order = std::min(order, e.order());
  JetMatrix a = m;
  JetMatrix inv(n, std::vector<Jet>(n, Jet(vars, order)));
  for (std::size_t k = 0; k < n; ++k) inv[k][k] = Jet::constant(vars, order, 1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].eval0().is_zero()) ++piv;
    if (piv == n) throw Error(Errc::NotAUnit, "matrix is singular at the origin");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Jet p = a[col][col].inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] = p * a[col][j];
      inv[col][j] = p * inv[col][j];
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      Jet f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

/// Rank of a Gaussian-rational matrix by exact elimination.
inline std::size_t rank(ScalarMatrix m) {
  std::size_t r = 0;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    GaussianRational inv = m[r][c].inverse();
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c].is_zero()) continue;
      GaussianRational f = m[i][c] * inv;
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

/// Exact determinant of a square Gaussian-rational matrix.
inline GaussianRational determinant(ScalarMatrix m) {
  const std::size_t n = m.size();
  GaussianRational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c].is_zero()) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    GaussianRational inv = m[c][c].inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c].is_zero()) continue;
      GaussianRational f = m[i][c] * inv;
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

/// Incremental row-echelon basis used by greedy selections: add() reports
/// whether a vector is independent of those added before.
class EchelonBasis {
 public:
  bool add(std::vector<GaussianRational> v) {
    for (const auto& [pivot, row] : rows_) {
      if (v[pivot].is_zero()) continue;
      GaussianRational f = v[pivot] / row[pivot];
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= f * row[j];
    }
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!v[j].is_zero()) {
        rows_.emplace_back(j, std::move(v));
        return true;
      }
    return false;
  }
  std::size_t rank() const { return rows_.size(); }

 private:
  std::vector<std::pair<std::size_t, std::vector<GaussianRational>>> rows_;
};

}  // namespace crmult
