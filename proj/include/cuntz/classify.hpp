#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cuntz/extended_sets.hpp"
#include "cuntz/invariant_sets.hpp"
#include "cuntz/semigroup.hpp"

namespace cuntz {

/// Omega_{i} = Gamma for every i. A semigroup is the whole group once it
/// contains every standard generator and its negative.
inline bool is_simple(const SemigroupFamily& f) {
  const auto& g = f.group();
  for (std::size_t i = 0; i < f.n(); ++i) {
    const auto& s = f.semigroup(IndexSet{i});
    for (std::size_t k = 0; k < g->dimension(); ++k) {
      GroupElem e = GroupElem::unit(g, k);
      if (!s.contains(e) || !s.contains(-e)) return false;
    }
  }
  return true;
}

/// The weights generate Gamma.
inline bool is_primitive(const SemigroupFamily& f) {
  return subgroup_generated(f.group(), f.action().omega).is_whole_group();
}

/// Short human-readable name for a semigroup.
inline std::string describe_semigroup(const SemigroupDesc& s) {
  const auto& g = s.action().group;
  if (s.units().is_whole_group()) return g->to_string();
  if (s.explicit_closure()) return FiniteSet(s.explicit_closure()->enumeration, s.explicit_closure()->members).to_string();
  if (g->rank == 1 && g->torsion.empty()) {
    bool nonneg = true, nonpos = true;
    for (const auto& h : s.generators()) {
      nonneg = nonneg && h[0] >= 0;
      nonpos = nonpos && h[0] <= 0;
    }
    GroupElem one = GroupElem::unit(g, 0);
    if (nonneg && s.contains(one)) return "N";
    if (nonpos && s.contains(-one)) return "-N";
  }
  std::string out = "sgp(";
  bool first = true;
  std::vector<GroupElem> seen;
  for (const auto& h : s.generators()) {
    if (std::find(seen.begin(), seen.end(), h) != seen.end()) continue;
    seen.push_back(h);
    out += (first ? "" : ", ") + h.to_string();
    first = false;
  }
  return out + ")";
}

/// The intersection of the Omega_{i}, as a membership oracle.
struct SpectrumDesc {
  FamilyPtr family;
  std::optional<FiniteSet> explicit_set;
  std::string description;

  bool contains(const GroupElem& g) const {
    for (std::size_t i = 0; i < family->n(); ++i)
      if (!family->semigroup(IndexSet{i}).contains(g)) return false;
    return true;
  }
};

inline SpectrumDesc strong_connes_spectrum(const FamilyPtr& f) {
  SpectrumDesc sp{f, std::nullopt, {}};
  if (f->group()->is_finite() && *f->group()->order() <= f->limits().max_finite_order) {
    auto e = enumerate_group(*f);
    boost::dynamic_bitset<> b(e->order());
    for (std::size_t k = 0; k < e->order(); ++k)
      if (sp.contains(e->element_at(k))) b.set(k);
    sp.explicit_set = FiniteSet(e, std::move(b));
  }
  // If one Omega_{i} lies inside all others, the intersection is that one.
  for (std::size_t i = 0; i < f->n(); ++i) {
    const auto& si = f->semigroup(IndexSet{i});
    bool least = true;
    for (std::size_t j = 0; j < f->n() && least; ++j) {
      if (j == i) continue;
      const auto& sj = f->semigroup(IndexSet{j});
      for (const auto& h : si.generators())
        if (!sj.contains(h)) {
          least = false;
          break;
        }
    }
    if (least) {
      sp.description = describe_semigroup(si);
      return sp;
    }
  }
  if (sp.explicit_set) {
    sp.description = sp.explicit_set->to_string();
    return sp;
  }
  std::string d;
  for (std::size_t i = 0; i < f->n(); ++i) d += (i ? " & " : "") + describe_semigroup(f->semigroup(IndexSet{i}));
  sp.description = d;
  return sp;
}

struct IndexClass {
  IndexSet rep;
  std::vector<IndexSet> members;
};

/// Non-empty index sets grouped by equality of Omega_I. Representatives and
/// members are shortlex-least first.
inline std::vector<IndexClass> index_class_reps(const SemigroupFamily& f) {
  if (f.n() > f.limits().max_weights)
    throw ResourceLimitError("index classes need n <= " + std::to_string(f.limits().max_weights));
  std::vector<IndexSet> all;
  for (std::uint32_t b = 1; b < (1u << f.n()); ++b) all.push_back(IndexSet::from_bits(b));
  std::sort(all.begin(), all.end(), IndexSet::shortlex_less);
  std::vector<IndexClass> classes;
  for (auto I : all) {
    const auto& s = f.semigroup(I);
    bool placed = false;
    for (auto& c : classes)
      if (semigroups_equal(f.semigroup(c.rep), s)) {
        c.members.push_back(I);
        placed = true;
        break;
      }
    if (!placed) classes.push_back(IndexClass{I, {I}});
  }
  return classes;
}

struct PrimComponent {
  IndexSet rep;
  std::vector<IndexSet> members;
  bool circle = false;  // Gamma' x T instead of Gamma_I
  GroupSpec space;      // Gamma_I, or Gamma' when `circle`

  std::string description() const {
    if (circle) return space.is_trivial() ? "T" : space.to_string() + " x T";
    return space.is_trivial() ? "point" : space.to_string();
  }
};

struct PrimSpaceDesc {
  std::vector<PrimComponent> components;
  bool condition_held = true;
  std::optional<std::size_t> failing_index;
};

/// One component per class of index sets: Gamma_I = Gamma / (Omega_I ∩ -Omega_I);
/// when the condition fails at f, the class {f} (which is alone) gives
/// Gamma' x T.
inline PrimSpaceDesc primitive_ideal_space(const SemigroupFamily& f) {
  PrimSpaceDesc p;
  ConditionReport report = condition_check(f);
  p.condition_held = report.holds;
  p.failing_index = report.failing_index;
  for (auto& c : index_class_reps(f)) {
    PrimComponent comp{c.rep, c.members, false, {}};
    if (!report.holds && c.rep == IndexSet{*report.failing_index}) {
      if (c.members.size() != 1) throw Error("the failing index shares its class; this cannot happen");
      std::vector<GroupElem> gen{f.omega(*report.failing_index)};
      comp.circle = true;
      comp.space = *QuotientMap(subgroup_generated(f.group(), gen)).target();
    } else {
      comp.space = *QuotientMap(f.semigroup(c.rep).units()).target();
    }
    p.components.push_back(std::move(comp));
  }
  return p;
}

/// Closed-set test in the failing case: the primitive ideal labelled by
/// [gamma] in Gamma_I lies in the hull described by Y_{f} iff
/// [gamma + Omega_I] x T ⊆ Y_{f}. Point fibres are finite, so only the full
/// part can contribute.
inline bool closed_set_contains(const ExtSet& y_f, const GroupElem& gamma, IndexSet I) {
  return y_f.full().includes(Atom{gamma, I});
}

// ---------------------------------------------------------------------------
// Compact dual: weights in (Q/Z)^d.

inline Rational parse_rational(std::string_view text) {
  auto s = detail::trim(text);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = detail::trim(s.substr(1, s.size() - 2));
  auto slash = s.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(parse_integer(s));
    Integer q = parse_integer(s.substr(slash + 1));
    if (q == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    return Rational(parse_integer(s.substr(0, slash)), q);
  } catch (const ParseError&) {
    throw ParseError("weight '" + std::string(s) + "' is not an exact rational p/q; irrational weights are rejected");
  }
}

struct CompactDualReport {
  std::size_t torus_rank = 0;
  std::vector<Integer> invariant_factors;  // of the closed subgroup generated by the weights
  std::vector<Integer> primary_factors;    // prime powers, sorted
  Integer order = 1;

  std::string group_string() const {
    if (primary_factors.empty()) return "0";
    std::string out;
    for (const auto& q : primary_factors) out += (out.empty() ? "Z/" : " x Z/") + q.str();
    return out;
  }
  std::string prim_string() const {
    if (torus_rank == 0) return "point";
    return torus_rank == 1 ? "T" : "T^" + std::to_string(torus_rank);
  }
  std::string statement() const {
    const std::string q = primary_factors.size() > 1 ? "(" + group_string() + ")" : group_string();
    return "ideals correspond to closed subsets of " + prim_string() + "/" + q + " = " + prim_string() +
           "; every fibre is simple";
  }
};

namespace detail {

inline std::vector<std::pair<Integer, unsigned>> factorize(Integer n) {
  std::vector<std::pair<Integer, unsigned>> out;
  for (Integer p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

}  // namespace detail

/// Prime-power decomposition of a direct sum of cyclic groups Z/c.
inline std::vector<Integer> primary_decomposition(const std::vector<Integer>& cyclic) {
  std::vector<Integer> out;
  for (const auto& c : cyclic)
    for (const auto& [p, e] : detail::factorize(c)) out.push_back(boost::multiprecision::pow(p, e));
  std::sort(out.begin(), out.end(), [](const Integer& a, const Integer& b) {
    Integer pa = detail::factorize(a)[0].first, pb = detail::factorize(b)[0].first;
    return pa != pb ? pa < pb : a < b;
  });
  return out;
}

/// Recombines cyclic orders into the invariant-factor chain d1 | d2 | ... .
inline std::vector<Integer> invariant_factor_chain(const std::vector<Integer>& cyclic) {
  std::map<Integer, std::vector<Integer>> by_prime;
  for (const auto& c : cyclic)
    for (const auto& [p, e] : detail::factorize(c)) by_prime[p].push_back(boost::multiprecision::pow(p, e));
  std::size_t len = 0;
  for (auto& [p, powers] : by_prime) {
    std::sort(powers.rbegin(), powers.rend());
    len = std::max(len, powers.size());
  }
  std::vector<Integer> chain(len, 1);
  for (const auto& [p, powers] : by_prime)
    for (std::size_t k = 0; k < powers.size(); ++k) chain[k] *= powers[k];
  std::reverse(chain.begin(), chain.end());
  return chain;
}

/// The subgroup of (Q/Z)^d generated by rational weights. Scaling by the
/// common denominator N puts it inside (Z/N)^d as L / N Z^d, where L is
/// spanned by the scaled weights and N e_k; if L has Smith factors D_k then
/// the subgroup is ⊕ Z/(N/D_k).
inline CompactDualReport analyze_compact_dual(std::size_t d, const std::vector<std::vector<Rational>>& weights) {
  CompactDualReport r;
  r.torus_rank = d;
  Integer N = 1;
  for (const auto& w : weights) {
    if (w.size() != d)
      throw ParseError("compact weight has " + std::to_string(w.size()) + " entries, expected " + std::to_string(d));
    for (const auto& x : w) N = lcm(N, boost::multiprecision::denominator(x));
  }
  if (N > (Integer(1) << 40)) throw ResourceLimitError("common denominator " + N.str() + " is too large");
  if (d == 0) return r;
  IntMatrix m(weights.size() + d, d);
  for (std::size_t i = 0; i < weights.size(); ++i)
    for (std::size_t k = 0; k < d; ++k) m(i, k) = boost::multiprecision::numerator(Rational(weights[i][k] * N));
  for (std::size_t k = 0; k < d; ++k) m(weights.size() + k, k) = N;
  std::vector<Integer> cyclic;
  for (const auto& dk : smith_diagonal(m))
    if (N / dk > 1) cyclic.push_back(N / dk);
  r.invariant_factors = invariant_factor_chain(cyclic);
  r.primary_factors = primary_decomposition(cyclic);
  for (const auto& c : cyclic) r.order *= c;
  return r;
}

}  // namespace cuntz
