#pragma once

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "posetnet/error.hpp"

namespace posetnet {

using IntMatrix = std::vector<std::vector<long long>>;

namespace detail {

inline void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) { std::swap(m[a], m[b]); }

inline void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  for (auto& row : m) std::swap(row[a], row[b]);
}

}  // namespace detail

/// Diagonal of the Smith normal form: nonnegative entries d1 | d2 | ...
/// padded with zeros up to min(rows, cols). Plain elimination; entries at
/// desk scale stay tiny.
inline std::vector<long long> smith_diagonal(IntMatrix m) {
  std::size_t rows = m.size();
  std::size_t cols = rows ? m[0].size() : 0;
  std::vector<long long> diag;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // Locate a pivot of least absolute value.
    std::size_t pi = t, pj = t;
    long long best = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (m[i][j] != 0 && (best == 0 || std::llabs(m[i][j]) < best)) {
          best = std::llabs(m[i][j]);
          pi = i;
          pj = j;
        }
    if (best == 0) break;
    detail::swap_rows(m, t, pi);
    detail::swap_cols(m, t, pj);
    bool clean = true;
    for (std::size_t i = t + 1; i < rows; ++i) {
      long long q = m[i][t] / m[t][t];
      if (q != 0)
        for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
      if (m[i][t] != 0) clean = false;
    }
    for (std::size_t j = t + 1; j < cols; ++j) {
      long long q = m[t][j] / m[t][t];
      if (q != 0)
        for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
      if (m[t][j] != 0) clean = false;
    }
    if (!clean) continue;  // smaller remainders appeared; repick pivot
    // Enforce divisibility of the remaining block by the pivot.
    bool divisible = true;
    for (std::size_t i = t + 1; i < rows && divisible; ++i)
      for (std::size_t j = t + 1; j < cols && divisible; ++j)
        if (m[i][j] % m[t][t] != 0) {
          for (std::size_t jj = t; jj < cols; ++jj) m[t][jj] += m[i][jj];
          divisible = false;
        }
    if (!divisible) continue;
    diag.push_back(std::llabs(m[t][t]));
    ++t;
  }
  while (diag.size() < std::min(rows, cols)) diag.push_back(0);
  return diag;
}

/// Row-style Hermite basis of the lattice spanned by the rows, for membership
/// tests. Rows are reduced to echelon form by integer row operations.
class IntLattice {
 public:
  explicit IntLattice(IntMatrix rows) {
    if (rows.empty()) return;
    cols_ = rows[0].size();
    for (auto& r : rows) insert(r);
  }

  std::size_t rank() const { return basis_.size(); }

  /// True iff v lies in the integer row span.
  bool contains(std::vector<long long> v) const {
    if (basis_.empty()) return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
    for (const auto& b : basis_) {
      std::size_t p = pivot_col(b);
      if (v[p] == 0) continue;
      if (v[p] % b[p] != 0) return false;
      long long q = v[p] / b[p];
      for (std::size_t j = 0; j < cols_; ++j) v[j] -= q * b[j];
    }
    return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
  }

 private:
  static std::size_t pivot_col(const std::vector<long long>& r) {
    for (std::size_t j = 0; j < r.size(); ++j)
      if (r[j] != 0) return j;
    return r.size();
  }

  void insert(std::vector<long long> v) {
    while (true) {
      std::size_t p = pivot_col(v);
      if (p == cols_) return;
      auto it = std::find_if(basis_.begin(), basis_.end(),
                             [&](const auto& b) { return pivot_col(b) == p; });
      if (it == basis_.end()) {
        if (v[p] < 0)
          for (auto& x : v) x = -x;
        basis_.push_back(std::move(v));
        std::sort(basis_.begin(), basis_.end(),
                  [](const auto& a, const auto& b) { return pivot_col(a) < pivot_col(b); });
        return;
      }
      // gcd step on the shared pivot column
      auto& b = *it;
      while (v[p] != 0) {
        long long q = b[p] / v[p];
        for (std::size_t j = 0; j < cols_; ++j) b[j] -= q * v[j];
        std::swap(b, v);
      }
      // v became zero on p; continue inserting the remainder
    }
  }

  std::size_t cols_ = 0;
  std::vector<std::vector<long long>> basis_;
};

/// Column rank over the rationals, by fraction-free elimination.
inline std::size_t rational_rank(IntMatrix m) {
  std::size_t rows = m.size();
  std::size_t cols = rows ? m[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[rank], m[pivot]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || m[i][c] == 0) continue;
      long long a = m[rank][c], b = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = m[i][j] * a - m[rank][j] * b;
    }
    ++rank;
  }
  return rank;
}

}  // namespace posetnet
