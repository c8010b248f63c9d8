#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "cuntz/errors.hpp"
#include "cuntz/semigroup.hpp"

namespace cuntz {

// ---------------------------------------------------------------------------
// Finite groups: sets as bitsets over the lexicographic enumeration.

using EnumerationPtr = std::shared_ptr<const FiniteEnumeration>;

class FiniteSet {
 public:
  FiniteSet(EnumerationPtr e, boost::dynamic_bitset<> bits) : enum_(std::move(e)), bits_(std::move(bits)) {
    if (bits_.size() != enum_->order()) throw DomainError("bitset length does not match the group order");
  }

  static FiniteSet empty(EnumerationPtr e) {
    const std::size_t n = e->order();
    return FiniteSet(std::move(e), boost::dynamic_bitset<>(n));
  }
  static FiniteSet full(EnumerationPtr e) {
    boost::dynamic_bitset<> b(e->order());
    b.set();
    return FiniteSet(std::move(e), std::move(b));
  }
  static FiniteSet of(EnumerationPtr e, const std::vector<GroupElem>& elems) {
    boost::dynamic_bitset<> b(e->order());
    for (const auto& g : elems) {
      if (!(g.group() == *e->group())) throw DomainError("element " + g.to_string() + " lies in another group");
      b.set(e->index_of(g));
    }
    return FiniteSet(std::move(e), std::move(b));
  }

  const EnumerationPtr& enumeration() const { return enum_; }
  const GroupPtr& group() const { return enum_->group(); }
  const boost::dynamic_bitset<>& bits() const { return bits_; }

  bool contains(const GroupElem& g) const { return bits_.test(enum_->index_of(g)); }
  std::size_t size() const { return bits_.count(); }
  bool is_empty() const { return bits_.none(); }

  std::vector<GroupElem> elements() const {
    std::vector<GroupElem> out;
    for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos; i = bits_.find_next(i))
      out.push_back(enum_->element_at(i));
    return out;
  }

  FiniteSet translated(const GroupElem& h) const {
    boost::dynamic_bitset<> b(bits_.size());
    for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos; i = bits_.find_next(i))
      b.set(enum_->add_index(i, h));
    return FiniteSet(enum_, std::move(b));
  }

  friend FiniteSet operator|(const FiniteSet& a, const FiniteSet& b) {
    a.require_same(b);
    return FiniteSet(a.enum_, a.bits_ | b.bits_);
  }
  friend FiniteSet operator&(const FiniteSet& a, const FiniteSet& b) {
    a.require_same(b);
    return FiniteSet(a.enum_, a.bits_ & b.bits_);
  }
  friend bool operator==(const FiniteSet& a, const FiniteSet& b) {
    return *a.group() == *b.group() && a.bits_ == b.bits_;
  }
  bool subset_of(const FiniteSet& o) const {
    require_same(o);
    return bits_.is_subset_of(o.bits_);
  }

  /// "{0, 2}" with elements in enumeration order.
  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (const auto& g : elements()) {
      out += (first ? "" : ", ") + g.to_string();
      first = false;
    }
    return out + "}";
  }

 private:
  void require_same(const FiniteSet& o) const {
    if (!(*group() == *o.group())) throw DomainError("sets live over different groups");
  }

  EnumerationPtr enum_;
  boost::dynamic_bitset<> bits_;
};

inline EnumerationPtr enumerate_group(const SemigroupFamily& f) {
  return std::make_shared<const FiniteEnumeration>(f.group(), f.limits().max_finite_order);
}

/// X = ⋃ (X + omega_i).
inline bool is_invariant_finite(const SemigroupFamily& f, const FiniteSet& x) {
  if (!(*x.group() == *f.group())) throw DomainError("set and action live over different groups");
  FiniteSet image = FiniteSet::empty(x.enumeration());
  for (std::size_t i = 0; i < f.n(); ++i) image = image | x.translated(f.omega(i));
  return image == x;
}

/// Gamma finite: ideals correspond to arbitrary unions of Omega-cosets.
struct IdealLatticeFinite {
  QuotientMap map;             // Gamma -> Gamma / Omega
  std::vector<GroupElem> coset_reps;  // lexicographically least element of each coset
  Integer count;               // 2^{|Gamma/Omega|}
};

inline IdealLatticeFinite ideal_lattice_finite(const SemigroupFamily& f) {
  if (!f.group()->is_finite())
    throw UnsupportedError("the ideal lattice is only enumerated for finite groups; use finitary set queries");
  auto e = enumerate_group(f);
  // Every element of a finite group has finite order, so Omega is the
  // subgroup generated by the weights.
  IdealLatticeFinite lat{QuotientMap(subgroup_generated(f.group(), f.action().omega)), {}, 0};
  std::vector<std::vector<Integer>> seen;
  for (std::size_t i = 0; i < e->order(); ++i) {
    GroupElem g = e->element_at(i);
    auto key = lat.map.project(g).coords();
    if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
      seen.push_back(std::move(key));
      lat.coset_reps.push_back(g);
    }
  }
  lat.count = Integer(1) << static_cast<unsigned>(lat.coset_reps.size());
  return lat;
}

/// Exhaustive scan of all subsets (|Gamma| <= limits.max_brute_force_order),
/// ordered by the integer whose bit k is element k of the enumeration.
inline std::vector<FiniteSet> brute_force_invariant_sets(const SemigroupFamily& f) {
  if (!f.group()->is_finite()) throw UnsupportedError("brute force needs a finite group");
  auto e = enumerate_group(f);
  const std::size_t order = e->order();
  if (order > f.limits().max_brute_force_order || order > 20)
    throw ResourceLimitError("brute force over " + std::to_string(order) + " elements exceeds the limit " +
                             std::to_string(f.limits().max_brute_force_order));
  std::vector<std::vector<std::size_t>> shift(f.n(), std::vector<std::size_t>(order));
  for (std::size_t i = 0; i < f.n(); ++i)
    for (std::size_t k = 0; k < order; ++k) shift[i][k] = e->add_index(k, f.omega(i));
  std::vector<FiniteSet> out;
  const std::uint32_t total = 1u << order;
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    std::uint32_t image = 0;
    for (std::size_t k = 0; k < order; ++k)
      if ((mask >> k) & 1u)
        for (std::size_t i = 0; i < f.n(); ++i) image |= 1u << shift[i][k];
    if (image != mask) continue;
    boost::dynamic_bitset<> b(order, 0);
    for (std::size_t k = 0; k < order; ++k)
      if ((mask >> k) & 1u) b.set(k);
    out.emplace_back(e, std::move(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finitary sets: finite unions of translates gamma + Omega_I.

struct Atom {
  GroupElem base;
  IndexSet indices;

  bool operator==(const Atom&) const = default;
  std::string to_string() const {
    std::string b = base.to_string();
    return "atom(" + b + "," + indices.to_string() + ")";
  }
};

inline bool atom_order(const Atom& a, const Atom& b) {
  if (a.base.coords() != b.base.coords()) return a.base.coords() < b.base.coords();
  return IndexSet::shortlex_less(a.indices, b.indices);
}

class FinitarySet {
 public:
  explicit FinitarySet(FamilyPtr family, std::vector<Atom> atoms = {})
      : family_(std::move(family)), atoms_(std::move(atoms)) {
    for (const auto& a : atoms_) {
      if (!(a.base.group() == *family_->group()))
        throw DomainError("atom base " + a.base.to_string() + " lies in another group");
      if (a.indices.bound() > family_->n())
        throw DomainError("atom index set " + a.indices.to_string() + " out of range");
    }
  }

  static FinitarySet atom(FamilyPtr family, GroupElem base, IndexSet I) {
    return FinitarySet(std::move(family), {Atom{std::move(base), I}});
  }

  const FamilyPtr& family() const { return family_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  bool is_empty() const { return atoms_.empty(); }

  bool contains(const GroupElem& g) const {
    for (const auto& a : atoms_)
      if (family_->semigroup(a.indices).contains(g - a.base)) return true;
    return false;
  }

  /// a ⊆ b for single atoms: a's base lies in b, and b absorbs every
  /// generator of Omega_{I_a} (the positive weights always are absorbed).
  bool atom_within(const Atom& a, const Atom& b) const {
    const auto& sb = family_->semigroup(b.indices);
    if (!sb.contains(a.base - b.base)) return false;
    for (auto i : a.indices.elements())
      if (!sb.contains(-family_->omega(i))) return false;
    return true;
  }

  /// An atom lies in a finite union of atoms iff it lies in one of them.
  /// Sketch: with s = sum of omega_i over I, gamma + Omega_I is the
  /// increasing union of gamma - m*s + Omega (m >= 0), since every element
  /// uses finitely many inverted generators. By pigeonhole one atom of the
  /// union contains infinitely many of these, hence all of them.
  bool includes(const Atom& a) const {
    for (const auto& b : atoms_)
      if (atom_within(a, b)) return true;
    return false;
  }

  bool subset_of(const FinitarySet& o) const {
    require_same(o);
    for (const auto& a : atoms_)
      if (!o.includes(a)) return false;
    return true;
  }

  friend bool operator==(const FinitarySet& a, const FinitarySet& b) { return a.subset_of(b) && b.subset_of(a); }

  FinitarySet united(const FinitarySet& o) const {
    require_same(o);
    std::vector<Atom> atoms = atoms_;
    atoms.insert(atoms.end(), o.atoms_.begin(), o.atoms_.end());
    return FinitarySet(family_, std::move(atoms));
  }

  FinitarySet translated(const GroupElem& h) const {
    std::vector<Atom> atoms;
    for (const auto& a : atoms_) atoms.push_back(Atom{a.base + h, a.indices});
    return FinitarySet(family_, std::move(atoms));
  }

  /// Drops atoms covered by another atom and sorts the rest. Among atoms
  /// that are equal as sets the least one (base, then index set) survives.
  FinitarySet simplified() const {
    std::vector<Atom> sorted = atoms_;
    std::sort(sorted.begin(), sorted.end(), atom_order);
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<Atom> kept;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < sorted.size() && !redundant; ++j) {
        if (i == j || !atom_within(sorted[i], sorted[j])) continue;
        // strictly smaller, or equal and ordered later
        redundant = !atom_within(sorted[j], sorted[i]) || j < i;
      }
      if (!redundant) kept.push_back(sorted[i]);
    }
    return FinitarySet(family_, std::move(kept));
  }

  /// Invariance means every point of X has a predecessor x - omega_i in X
  /// (X + omega_i ⊆ X holds for any union of atoms). Inside an atom
  /// (gamma, I) every point other than an I = ∅ base has one: with i in I,
  /// x - omega_i = x + (-omega_i); otherwise strip one positive generator. So
  /// only bases of ∅-atoms need checking. Returns such a base when it has no
  /// predecessor.
  std::optional<GroupElem> invariance_violation() const {
    for (const auto& a : atoms_) {
      if (!a.indices.empty()) continue;
      bool ok = false;
      for (std::size_t i = 0; i < family_->n() && !ok; ++i) ok = contains(a.base - family_->omega(i));
      if (!ok) return a.base;
    }
    return std::nullopt;
  }

  bool is_invariant() const { return !invariance_violation(); }

  /// Re-parseable expression: empty(), atom(b,{..}) or union(...).
  std::string to_string() const {
    if (atoms_.empty()) return "empty()";
    if (atoms_.size() == 1) return atoms_[0].to_string();
    std::string out = "union(";
    for (std::size_t i = 0; i < atoms_.size(); ++i) out += (i ? "," : "") + atoms_[i].to_string();
    return out + ")";
  }

  /// Explicit bitset when the group is finite.
  FiniteSet to_finite() const {
    auto e = enumerate_group(*family_);
    boost::dynamic_bitset<> b(e->order());
    for (std::size_t k = 0; k < e->order(); ++k)
      if (contains(e->element_at(k))) b.set(k);
    return FiniteSet(e, std::move(b));
  }

 private:
  void require_same(const FinitarySet& o) const {
    if (family_ != o.family_ && !(family_->action() == o.family_->action()))
      throw DomainError("finitary sets belong to different actions");
  }

  FamilyPtr family_;
  std::vector<Atom> atoms_;
};

inline bool is_invariant(const FinitarySet& x) { return x.is_invariant(); }

/// Minimal invariant sets containing gamma. Any invariant X containing gamma
/// has an infinite backward chain gamma - omega_{i1} - omega_{i2} - ... ;
/// if S is the set of indices used infinitely often, X ⊇ gamma + Omega_S ⊇
/// gamma + Omega_{i} for i in S. Each gamma + Omega_{i} is invariant, so the
/// minimal ones among them are the answer. There is exactly one, equal to
/// gamma + Omega, when some -omega_i lies in Omega.
inline std::vector<FinitarySet> minimal_invariant_containing(const FamilyPtr& f, const GroupElem& gamma) {
  const auto& omega = f->semigroup({});
  for (std::size_t i = 0; i < f->n(); ++i)
    if (omega.contains(-f->omega(i))) return {FinitarySet::atom(f, gamma, {})};
  std::vector<FinitarySet> candidates;
  for (std::size_t i = 0; i < f->n(); ++i) candidates.push_back(FinitarySet::atom(f, gamma, IndexSet{i}));
  std::vector<FinitarySet> minimal;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < candidates.size() && keep; ++j) {
      if (i == j || !candidates[j].subset_of(candidates[i])) continue;
      keep = !candidates[i].subset_of(candidates[j]) ? false : i < j;
    }
    if (keep) minimal.push_back(candidates[i]);
  }
  return minimal;
}

struct PrimeResult {
  bool prime = false;
  std::optional<Atom> witness;  // X = base + Omega_I with I non-empty
};

inline void require_invariant_nonempty(const FinitarySet& x) {
  if (x.is_empty()) throw PreconditionError("the set is empty");
  if (auto w = x.invariance_violation())
    throw PreconditionError("the set is not invariant: " + w->to_string() + " has no predecessor", w->to_string());
}

/// X is prime iff X = gamma + Omega_I with I non-empty. Since an atom inside
/// a finite union lies in a single atom, X is of that form iff one of its own
/// atoms contains all the others.
inline PrimeResult is_prime(const FinitarySet& x) {
  require_invariant_nonempty(x);
  const auto& f = *x.family();
  for (const auto& a : x.atoms()) {
    FinitarySet single(x.family(), {a});
    if (!x.subset_of(single)) continue;
    if (!a.indices.empty()) return {true, a};
    // X = gamma + Omega is invariant, so some -omega_i lies in Omega, and
    // then Omega = Omega_{i}.
    const auto& omega = f.semigroup({});
    for (std::size_t i = 0; i < f.n(); ++i)
      if (omega.contains(-f.omega(i))) return {true, Atom{a.base, IndexSet{i}}};
    return {false, std::nullopt};
  }
  return {false, std::nullopt};
}

/// Finite Gamma: Omega is a subgroup and X is prime iff it is one coset.
inline PrimeResult is_prime(const SemigroupFamily& f, const FiniteSet& x) {
  if (x.is_empty()) throw PreconditionError("the set is empty");
  if (!is_invariant_finite(f, x)) throw PreconditionError("the set is not invariant");
  const auto& omega = f.semigroup({});
  GroupElem g = x.enumeration()->element_at(x.bits().find_first());
  FiniteSet coset = FiniteSet(x.enumeration(), omega.explicit_closure()->members).translated(g);
  if (coset == x) return {true, Atom{g, IndexSet{0}}};
  return {false, std::nullopt};
}

struct BadResult {
  bool bad = false;
  std::optional<GroupElem> witness;  // a point whose only predecessor is through omega_f
};

/// Bad sets exist only when the condition fails at some index f. Then every
/// other weight has infinite order, and X is bad iff some point x has no
/// predecessor x - omega_i in X for i != f.
///
/// Candidates: a point of an atom with some i != f in I, or a point reached
/// from its base with some omega_i (i != f), has x - omega_i inside the same
/// atom. What remains are the points gamma_j + k*omega_f (0 <= k < K) of
/// atoms with I_j ⊆ {f}; -omega_f = (K-1) omega_f adds nothing new.
inline BadResult is_bad(const FinitarySet& x, const ConditionReport& report) {
  if (auto w = x.invariance_violation())
    throw PreconditionError("the set is not invariant: " + w->to_string() + " has no predecessor", w->to_string());
  if (report.holds) return {};
  const std::size_t fi = *report.failing_index;
  const auto& fam = *x.family();
  const std::size_t K = report.K->convert_to<std::size_t>();
  for (const auto& a : x.atoms()) {
    if (!a.indices.subset_of(IndexSet{fi})) continue;
    GroupElem g = a.base;
    for (std::size_t k = 0; k < K; ++k, g = g + fam.omega(fi)) {
      bool has_other = false;
      for (std::size_t i = 0; i < fam.n() && !has_other; ++i)
        if (i != fi) has_other = x.contains(g - fam.omega(i));
      if (!has_other) return {true, g};
    }
  }
  return {};
}

/// Finite route: X' = ⋃_{i != f} (X + omega_i) and X is bad iff X' != X.
inline BadResult is_bad(const SemigroupFamily& f, const FiniteSet& x, const ConditionReport& report) {
  if (!is_invariant_finite(f, x)) throw PreconditionError("the set is not invariant");
  if (report.holds) return {};
  const std::size_t fi = *report.failing_index;
  FiniteSet xp = FiniteSet::empty(x.enumeration());
  for (std::size_t i = 0; i < f.n(); ++i)
    if (i != fi) xp = xp | x.translated(f.omega(i));
  if (xp == x) return {};
  for (std::size_t k = 0; k < x.bits().size(); ++k)
    if (x.bits().test(k) && !xp.bits().test(k)) return {true, x.enumeration()->element_at(k)};
  return {};
}

}  // namespace cuntz
