#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "cuntz/integer.hpp"
#include "cuntz/matrix.hpp"
#include "cuntz/normal_form.hpp"

namespace cuntz {

/// H-description of the rational cone spanned by finitely many integer
/// vectors: x is in the cone iff every equation vanishes on x and every
/// facet normal is non-negative on x. Facet normals are primitive and lie in
/// the linear span of the generators.
struct ConeDescription {
  std::size_t ambient = 0;
  std::size_t dimension = 0;
  std::vector<std::vector<Integer>> equations;
  std::vector<std::vector<Integer>> facets;

  static Integer dot(std::span<const Integer> a, std::span<const Integer> b) {
    Integer s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
  }

  bool in_span(std::span<const Integer> x) const {
    for (const auto& e : equations)
      if (dot(e, x) != 0) return false;
    return true;
  }

  bool contains(std::span<const Integer> x) const {
    if (!in_span(x)) return false;
    for (const auto& f : facets)
      if (dot(f, x) < 0) return false;
    return true;
  }

  /// x lies in the largest linear subspace contained in the cone.
  bool in_lineality(std::span<const Integer> x) const {
    if (!in_span(x)) return false;
    for (const auto& f : facets)
      if (dot(f, x) != 0) return false;
    return true;
  }
};

namespace detail {

inline void make_primitive(std::vector<Integer>& v) {
  Integer g = 0;
  for (const auto& c : v) g = gcd(g, c);
  if (g > 1)
    for (auto& c : v) c /= g;
}

template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  for (;;) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

/// Facets are found by brute force over (dim-1)-subsets of generators, which
/// is fine for the handful of generators this library deals with. A facet of
/// a cone (pointed or not) always contains dim-1 independent generators, and
/// any hyperplane through such a subset that supports all generators is a
/// facet, so the enumeration is exact.
inline ConeDescription describe_cone(const std::vector<std::vector<Integer>>& gens, std::size_t ambient) {
  ConeDescription c;
  c.ambient = ambient;
  if (ambient == 0) return c;
  IntMatrix a(gens.size(), ambient);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < ambient; ++j) a(i, j) = gens[i][j];
  c.equations = integer_kernel(a);
  c.dimension = ambient - c.equations.size();
  if (c.dimension == 0) return c;

  detail::for_each_subset(gens.size(), c.dimension - 1, [&](const std::vector<std::size_t>& subset) {
    IntMatrix m(subset.size() + c.equations.size(), ambient);
    std::size_t r = 0;
    for (auto i : subset) {
      for (std::size_t j = 0; j < ambient; ++j) m(r, j) = gens[i][j];
      ++r;
    }
    for (const auto& e : c.equations) {
      for (std::size_t j = 0; j < ambient; ++j) m(r, j) = e[j];
      ++r;
    }
    auto ker = integer_kernel(m);
    if (ker.size() != 1) return;
    auto n = ker[0];
    bool pos = false, neg = false;
    for (const auto& g : gens) {
      Integer d = ConeDescription::dot(n, g);
      if (d > 0) pos = true;
      if (d < 0) neg = true;
    }
    if (pos && neg) return;
    if (neg)
      for (auto& x : n) x = -x;
    detail::make_primitive(n);
    if (std::find(c.facets.begin(), c.facets.end(), n) == c.facets.end()) c.facets.push_back(std::move(n));
  });
  std::sort(c.facets.begin(), c.facets.end());
  return c;
}

}  // namespace cuntz
