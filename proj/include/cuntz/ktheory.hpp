#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "cuntz/invariant_sets.hpp"
#include "cuntz/normal_form.hpp"
#include "cuntz/semigroup.hpp"

namespace cuntz {

// For finite Gamma the base algebra C(Gamma) has K_1 = 0, so the six-term
// sequence
//
//   K0(C(Γ)) --(id - Σ σ_*)--> K0(C(Γ)) --> K0(O_n ⋊ G)
//       ^                                        |
//       |                                        v
//   K1(O_n ⋊ G) <-- 0 <------------------ 0 <-- K1(C(Γ)) = 0
//
// collapses to K0 = coker M and K1 = ker M with M = I - Σ P_{omega_i}.

struct KGroupReport {
  std::vector<Integer> k0_invariant_factors;
  std::size_t k0_free_rank = 0;
  std::size_t k1_free_rank = 0;
  std::size_t matrix_size = 0;
};

/// Column h of P_w is e_{h+w}.
inline IntMatrix translation_matrix(const FiniteEnumeration& e, const GroupElem& w) {
  IntMatrix p(e.order(), e.order());
  for (std::size_t h = 0; h < e.order(); ++h) p(e.add_index(h, w), h) = 1;
  return p;
}

/// Dense M = I - Σ P_{omega_i} over all of Gamma. Used by tests as the
/// direct route; kgroups_finite does not build it.
inline IntMatrix kmatrix_dense(const SemigroupFamily& f) {
  auto e = enumerate_group(f);
  IntMatrix m = IntMatrix::identity(e->order());
  for (std::size_t h = 0; h < e->order(); ++h)
    for (std::size_t i = 0; i < f.n(); ++i) m(e->add_index(h, f.omega(i)), h) -= 1;
  return m;
}

namespace detail {

/// Smith data of a square integer matrix given as sparse columns.
/// Unit pivots are eliminated first (Markowitz order), the rest goes to a
/// dense Smith reduction.
struct SparseSmith {
  std::vector<Integer> factors;  // > 1
  std::size_t rank = 0;
};

inline SparseSmith sparse_smith(std::size_t nrows, std::size_t ncols,
                                std::vector<std::map<std::size_t, Integer>> rows) {
  std::vector<std::set<std::size_t>> cols(ncols);
  for (std::size_t r = 0; r < nrows; ++r)
    for (const auto& [c, v] : rows[r]) cols[c].insert(r);
  std::vector<bool> row_alive(nrows, true), col_alive(ncols, true);
  std::size_t pivots = 0;

  for (;;) {
    std::size_t best_r = nrows, best_c = 0, best_cost = SIZE_MAX;
    for (std::size_t r = 0; r < nrows && best_cost; ++r) {
      if (!row_alive[r]) continue;
      for (const auto& [c, v] : rows[r]) {
        if (v != 1 && v != -1) continue;
        std::size_t cost = (rows[r].size() - 1) * (cols[c].size() - 1);
        if (cost < best_cost) {
          best_cost = cost;
          best_r = r;
          best_c = c;
          if (!cost) break;
        }
      }
    }
    if (best_r == nrows) break;
    const auto prow = rows[best_r];
    const Integer pv = prow.at(best_c);
    std::vector<std::size_t> targets(cols[best_c].begin(), cols[best_c].end());
    for (std::size_t r : targets) {
      if (r == best_r) continue;
      Integer k = rows[r].at(best_c) * pv;  // pv = ±1, so this is a / pv
      for (const auto& [c, v] : prow) {
        Integer nv = -k * v;
        if (auto it = rows[r].find(c); it != rows[r].end()) nv += it->second;
        if (nv == 0) {
          rows[r].erase(c);
          cols[c].erase(r);
        } else {
          rows[r][c] = nv;
          cols[c].insert(r);
        }
      }
    }
    for (const auto& [c, v] : prow) cols[c].erase(best_r);
    rows[best_r].clear();
    row_alive[best_r] = false;
    col_alive[best_c] = false;
    ++pivots;
  }

  std::vector<std::size_t> rr, cc;
  for (std::size_t r = 0; r < nrows; ++r)
    if (row_alive[r] && !rows[r].empty()) rr.push_back(r);
  std::unordered_map<std::size_t, std::size_t> cpos;
  for (std::size_t c = 0; c < ncols; ++c)
    if (col_alive[c] && !cols[c].empty()) {
      cpos[c] = cc.size();
      cc.push_back(c);
    }
  SparseSmith out;
  out.rank = pivots;
  if (!rr.empty() && !cc.empty()) {
    IntMatrix rest(rr.size(), cc.size());
    for (std::size_t i = 0; i < rr.size(); ++i)
      for (const auto& [c, v] : rows[rr[i]]) rest(i, cpos.at(c)) = v;
    for (const auto& d : smith_diagonal(std::move(rest))) {
      if (d != 0) ++out.rank;
      if (d > 1) out.factors.push_back(d);
    }
  }
  return out;
}

}  // namespace detail

/// K-groups for finite Gamma. M is block diagonal over the cosets of
/// H = <omega>, each block being the same matrix on H, so only that block is
/// reduced and the result is repeated [Gamma : H] times.
inline KGroupReport kgroups_finite(const SemigroupFamily& f) {
  const auto& g = f.group();
  if (!g->is_finite())
    throw UnsupportedError("K-groups are computed only for finite Gamma; use the presentation for " + g->to_string());
  auto e = enumerate_group(f);

  std::vector<std::size_t> members{0};
  std::unordered_map<std::size_t, std::size_t> local{{0, 0}};
  for (std::size_t q = 0; q < members.size(); ++q)
    for (std::size_t i = 0; i < f.n(); ++i) {
      std::size_t nb = e->add_index(members[q], f.omega(i));
      if (local.emplace(nb, members.size()).second) members.push_back(nb);
    }
  const std::size_t m = members.size();
  const std::size_t index = e->order() / m;

  std::vector<std::map<std::size_t, Integer>> rows(m);
  for (std::size_t h = 0; h < m; ++h) {
    rows[h][h] += 1;
    for (std::size_t i = 0; i < f.n(); ++i) rows[local.at(e->add_index(members[h], f.omega(i)))][h] -= 1;
  }
  for (auto& r : rows)
    for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);

  auto block = detail::sparse_smith(m, m, std::move(rows));
  std::sort(block.factors.begin(), block.factors.end());
  KGroupReport rep;
  rep.matrix_size = e->order();
  // index copies of a chain d1 | d2 | ... form the chain d1,..,d1,d2,..
  for (const auto& d : block.factors) rep.k0_invariant_factors.insert(rep.k0_invariant_factors.end(), index, d);
  rep.k0_free_rank = index * (m - block.rank);
  rep.k1_free_rank = rep.k0_free_rank;  // M is square: coker and ker have the same rank
  return rep;
}

/// Same report from the dense matrix on all of Gamma.
inline KGroupReport kgroups_dense(const SemigroupFamily& f) {
  IntMatrix m = kmatrix_dense(f);
  KGroupReport rep;
  rep.matrix_size = m.rows();
  std::size_t rank = 0;
  for (const auto& d : smith_diagonal(m)) {
    if (d != 0) ++rank;
    if (d > 1) rep.k0_invariant_factors.push_back(d);
  }
  rep.k0_free_rank = rep.k1_free_rank = m.rows() - rank;
  return rep;
}

struct Presentation {
  std::string ring;
  std::string element;
  std::vector<std::string> relations;
};

/// 1 - Σ [omega_i] in Z[Gamma]. Free coordinates are t (t1, t2, ... when
/// there are several), torsion coordinates s (s1, s2, ...).
inline Presentation presentation_matrix(const ActionSpec& a) {
  const auto& g = a.group;
  auto name = [&](std::size_t k) {
    if (k < g->rank) return g->rank == 1 ? std::string("t") : "t" + std::to_string(k + 1);
    std::size_t j = k - g->rank;
    return g->torsion.size() == 1 ? std::string("s") : "s" + std::to_string(j + 1);
  };
  Presentation p;
  std::vector<std::string> gens, inverses;
  for (std::size_t k = 0; k < g->dimension(); ++k) {
    gens.push_back(name(k));
    if (k < g->rank) gens.push_back(name(k) + "^-1");
    else p.relations.push_back(name(k) + "^" + g->torsion[k - g->rank].str() + " = 1");
  }
  p.ring = "Z";
  if (!gens.empty()) {
    p.ring += "[";
    for (std::size_t k = 0; k < gens.size(); ++k) p.ring += (k ? ", " : "") + gens[k];
    p.ring += "]";
    std::string rel;
    for (std::size_t j = 0; j < g->torsion.size(); ++j)
      rel += (j ? ", " : "") + name(g->rank + j) + "^" + g->torsion[j].str() + " - 1";
    if (!rel.empty()) p.ring += "/(" + rel + ")";
  }

  std::vector<std::pair<std::string, int>> terms;  // first-occurrence order
  for (const auto& w : a.omega) {
    std::string mono;
    for (std::size_t k = 0; k < g->dimension(); ++k) {
      if (w[k] == 0) continue;
      mono += (mono.empty() ? "" : " ") + name(k) + (w[k] == 1 ? "" : "^" + w[k].str());
    }
    auto it = std::find_if(terms.begin(), terms.end(), [&](const auto& t) { return t.first == mono; });
    if (it == terms.end()) terms.emplace_back(mono, 1);
    else ++it->second;
  }
  p.element = "1";
  for (const auto& [mono, c] : terms) {
    if (mono.empty()) p.element += " - " + std::to_string(c);
    else p.element += " - " + (c == 1 ? std::string() : std::to_string(c) + " ") + mono;
  }
  return p;
}

}  // namespace cuntz
