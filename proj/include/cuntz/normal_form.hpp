#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cuntz/integer.hpp"
#include "cuntz/matrix.hpp"

namespace cuntz {

/// Row-style Hermite normal form of the lattice spanned by the rows of `m`.
/// Zero rows are dropped, pivots are positive, and entries above a pivot lie
/// in [0, pivot). Two generating sets span the same lattice iff their HNFs
/// are equal.
inline IntMatrix hermite_normal_form(IntMatrix a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t i = r; i < rows; ++i)
        if (a(i, c) != 0 && (!best || abs(a(i, c)) < abs(a(*best, c)))) best = i;
      if (!best) break;
      a.swap_rows(r, *best);
      bool clean = true;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (a(i, c) == 0) continue;
        a.add_row_multiple(i, r, -(a(i, c) / a(r, c)));
        if (a(i, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (a(r, c) == 0) continue;
    if (a(r, c) < 0) a.negate_row(r);
    for (std::size_t i = 0; i < r; ++i) a.add_row_multiple(i, r, -floor_div(a(i, c), a(r, c)));
    ++r;
  }
  IntMatrix out(r, cols);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = a(i, j);
  return out;
}

/// U * M * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... .
struct SmithDecomposition {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  IntMatrix V_inverse;
  std::size_t rank = 0;

  std::vector<Integer> diagonal() const {
    std::vector<Integer> d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
    return d;
  }
};

namespace detail {

// Shared elimination; the trackers are skipped when `track` is false.
inline void smith_reduce(IntMatrix& a, IntMatrix* u, IntMatrix* v, IntMatrix* vinv) {
  const std::size_t rows = a.rows(), cols = a.cols();
  for (std::size_t k = 0; k < std::min(rows, cols); ++k) {
    for (;;) {
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = k; i < rows; ++i)
        for (std::size_t j = k; j < cols; ++j)
          if (a(i, j) != 0 && (!best || abs(a(i, j)) < abs(a(best->first, best->second))))
            best = {i, j};
      if (!best) return;
      a.swap_rows(k, best->first);
      if (u) u->swap_rows(k, best->first);
      a.swap_cols(k, best->second);
      if (v) v->swap_cols(k, best->second);
      if (vinv) vinv->swap_rows(k, best->second);

      bool clean = true;
      for (std::size_t i = k + 1; i < rows; ++i) {
        if (a(i, k) == 0) continue;
        Integer q = a(i, k) / a(k, k);
        a.add_row_multiple(i, k, -q);
        if (u) u->add_row_multiple(i, k, -q);
        if (a(i, k) != 0) clean = false;
      }
      for (std::size_t j = k + 1; j < cols; ++j) {
        if (a(k, j) == 0) continue;
        Integer q = a(k, j) / a(k, k);
        a.add_col_multiple(j, k, -q);
        if (v) v->add_col_multiple(j, k, -q);
        if (vinv) vinv->add_row_multiple(k, j, q);
        if (a(k, j) != 0) clean = false;
      }
      if (!clean) continue;

      std::optional<std::size_t> offending;
      for (std::size_t i = k + 1; i < rows && !offending; ++i)
        for (std::size_t j = k + 1; j < cols; ++j)
          if (a(i, j) % a(k, k) != 0) {
            offending = i;
            break;
          }
      if (!offending) break;
      a.add_row_multiple(k, *offending, 1);
      if (u) u->add_row_multiple(k, *offending, 1);
    }
    if (a(k, k) < 0) {
      a.negate_row(k);
      if (u) u->negate_row(k);
    }
  }
}

}  // namespace detail

inline SmithDecomposition smith_normal_form(const IntMatrix& m) {
  SmithDecomposition s{IntMatrix::identity(m.rows()), m, IntMatrix::identity(m.cols()),
                       IntMatrix::identity(m.cols()), 0};
  detail::smith_reduce(s.D, &s.U, &s.V, &s.V_inverse);
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
    if (s.D(i, i) != 0) ++s.rank;
  return s;
}

/// Diagonal of the Smith form, including trailing zeros up to min(rows, cols).
inline std::vector<Integer> smith_diagonal(IntMatrix m) {
  detail::smith_reduce(m, nullptr, nullptr, nullptr);
  std::vector<Integer> d;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) d.push_back(m(i, i));
  return d;
}

inline std::size_t matrix_rank(const IntMatrix& m) {
  std::size_t r = 0;
  for (const auto& d : smith_diagonal(m))
    if (d != 0) ++r;
  return r;
}

/// Basis (as rows) of the saturated lattice {x in Z^cols : m x = 0}.
inline std::vector<std::vector<Integer>> integer_kernel(const IntMatrix& m) {
  SmithDecomposition s = smith_normal_form(m);
  std::vector<std::vector<Integer>> basis;
  for (std::size_t j = s.rank; j < m.cols(); ++j) basis.push_back(s.V.col(j));
  return basis;
}

}  // namespace cuntz
