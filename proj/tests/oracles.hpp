// Independent reference computations used by the test suites. Everything
// here is deliberately naive: brute force, exhaustive scans, or textbook
// formulas that share no code with the library routines they check.
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "cuntz/integer.hpp"
#include "cuntz/matrix.hpp"

namespace oracle {

using cuntz::Integer;
using cuntz::IntMatrix;

/// Bareiss fraction-free determinant.
inline Integer determinant(IntMatrix a) {
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

/// Rank over Q by Gaussian elimination on rationals.
inline std::size_t rational_rank(const IntMatrix& m) {
  std::vector<std::vector<cuntz::Rational>> a(m.rows(), std::vector<cuntz::Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && a[p][c] == 0) ++p;
    if (p == m.rows()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      cuntz::Rational f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < m.cols(); ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = d(rng);
  return m;
}

/// Points of Z^d reachable from 0 by adding generators while staying in the
/// box [-radius, radius]^d, for a torsion part carried along unrestricted.
/// Coordinates: first `free_rank` are free, the rest reduced mod `torsion`.
inline std::set<std::vector<long long>> box_closure(const std::vector<std::vector<long long>>& gens,
                                                    std::size_t free_rank, const std::vector<long long>& torsion,
                                                    long long radius) {
  std::set<std::vector<long long>> seen;
  std::vector<std::vector<long long>> stack;
  std::vector<long long> zero(free_rank + torsion.size(), 0);
  seen.insert(zero);
  stack.push_back(zero);
  while (!stack.empty()) {
    auto cur = stack.back();
    stack.pop_back();
    for (const auto& g : gens) {
      auto nxt = cur;
      bool inside = true;
      for (std::size_t k = 0; k < free_rank; ++k) {
        nxt[k] += g[k];
        if (nxt[k] < -radius || nxt[k] > radius) inside = false;
      }
      for (std::size_t k = 0; k < torsion.size(); ++k)
        nxt[free_rank + k] = ((nxt[free_rank + k] + g[free_rank + k]) % torsion[k] + torsion[k]) % torsion[k];
      if (inside && seen.insert(nxt).second) stack.push_back(nxt);
    }
  }
  return seen;
}

}  // namespace oracle
