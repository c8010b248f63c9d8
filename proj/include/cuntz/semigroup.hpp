#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "cuntz/abelian_group.hpp"
#include "cuntz/cone.hpp"
#include "cuntz/errors.hpp"
#include "cuntz/limits.hpp"
#include "cuntz/subgroup.hpp"

namespace cuntz {

/// Subset of {0, ..., n-1}. Printed 1-based, e.g. "{1,3}".
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<std::size_t> zero_based) {
    for (auto i : zero_based) insert(i);
  }
  static IndexSet from_bits(std::uint32_t bits) {
    IndexSet s;
    s.bits_ = bits;
    return s;
  }
  static IndexSet all(std::size_t n) { return from_bits(n >= 32 ? ~0u : ((1u << n) - 1)); }

  bool contains(std::size_t i) const { return i < 32 && ((bits_ >> i) & 1u); }
  void insert(std::size_t i) {
    if (i >= 32) throw DomainError("index " + std::to_string(i + 1) + " out of range");
    bits_ |= 1u << i;
  }
  void erase(std::size_t i) {
    if (i < 32) bits_ &= ~(1u << i);
  }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  std::uint32_t bits() const { return bits_; }
  bool subset_of(IndexSet o) const { return (bits_ & ~o.bits_) == 0; }
  /// Largest element + 1 (0 for the empty set).
  std::size_t bound() const { return 32 - static_cast<std::size_t>(std::countl_zero(bits_)); }

  std::vector<std::size_t> elements() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < 32; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (auto i : elements()) {
      out += (first ? "" : ",") + std::to_string(i + 1);
      first = false;
    }
    return out + "}";
  }

  bool operator==(const IndexSet&) const = default;

  /// Size first, then lexicographic on the sorted elements.
  static bool shortlex_less(IndexSet a, IndexSet b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.elements() < b.elements();
  }

 private:
  std::uint32_t bits_ = 0;
};

/// Parses "{1,3}" (1-based) into a zero-based IndexSet.
inline IndexSet parse_index_set(std::string_view text) {
  auto values = detail::parse_integer_list(text, '{', '}');
  IndexSet s;
  for (const auto& v : values) {
    if (v < 1 || v > 32) throw ParseError("index " + v.str() + " out of range in " + std::string(text));
    s.insert(v.convert_to<std::size_t>() - 1);
  }
  return s;
}

/// Weights omega_1..omega_n over one group.
struct ActionSpec {
  GroupPtr group;
  std::vector<GroupElem> omega;

  std::size_t n() const { return omega.size(); }

  bool operator==(const ActionSpec& o) const { return *group == *o.group && omega == o.omega; }

  std::string to_string() const {
    std::string out = group->to_string() + ", omega=(";
    for (std::size_t i = 0; i < omega.size(); ++i) out += (i ? ", " : "") + omega[i].to_string();
    return out + ")";
  }
};

using ActionPtr = std::shared_ptr<const ActionSpec>;

/// Limits on the action itself. n and the torsion exponent are checked
/// when a semigroup is built (check_semigroup_limits), so K-theory over a
/// large cyclic group or with many weights does not trip them.
inline void check_limits(const ActionSpec& a, const Limits& limits) {
  if (a.group->rank > limits.max_rank)
    throw ResourceLimitError("free rank " + std::to_string(a.group->rank) + " exceeds the limit " +
                             std::to_string(limits.max_rank));
  for (const auto& w : a.omega)
    for (const auto& c : w.free_part())
      if (abs(c) > limits.max_coordinate)
        throw ResourceLimitError("weight coordinate " + c.str() + " exceeds the limit " +
                                 std::to_string(limits.max_coordinate));
}

inline void check_semigroup_limits(const ActionSpec& a, const Limits& limits) {
  if (a.n() > limits.max_weights)
    throw ResourceLimitError("n = " + std::to_string(a.n()) + " exceeds the limit " +
                             std::to_string(limits.max_weights));
  if (a.group->exponent() > limits.max_exponent)
    throw ResourceLimitError("torsion exponent " + a.group->exponent().str() + " exceeds the limit " +
                             std::to_string(limits.max_exponent));
}

inline ActionPtr make_action(GroupPtr group, std::vector<GroupElem> omega, const Limits& limits = {}) {
  if (omega.size() < 2) throw DomainError("an action needs n >= 2 weights, got " + std::to_string(omega.size()));
  for (const auto& w : omega)
    if (!(w.group() == *group)) throw DomainError("weight " + w.to_string() + " lies in another group");
  auto a = std::make_shared<const ActionSpec>(ActionSpec{std::move(group), std::move(omega)});
  check_limits(*a, limits);
  return a;
}

/// Bitset over a dense enumeration of a finite group.
struct ExplicitSubset {
  std::shared_ptr<const FiniteEnumeration> enumeration;
  boost::dynamic_bitset<> members;

  bool contains(const GroupElem& g) const { return members.test(enumeration->index_of(g)); }
  std::vector<GroupElem> elements() const {
    std::vector<GroupElem> out;
    for (auto i = members.find_first(); i != boost::dynamic_bitset<>::npos; i = members.find_next(i))
      out.push_back(enumeration->element_at(i));
    return out;
  }
};

namespace detail {

struct Int64VecHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Omega_I = U + Mon(ω_j : j in rest) where U is the units subgroup. In
// Gamma/U the remaining generators span a pointed cone, so the sum of the
// facet normals is a grading that every step strictly decreases; this bounds
// the search.
//
// Units are found by a fixpoint: a generator whose image lies in the
// lineality space of the cone spanned by the others is invertible in the
// semigroup (a positive rational combination cancels its free part, and the
// leftover torsion dies after finitely many repetitions), so it joins U.
struct PointedReduction {
  SubgroupDesc units;
  QuotientMap to_pointed;
  ConeDescription cone;
  std::size_t free_rank = 0;
  std::vector<std::int64_t> torsion;
  std::vector<std::vector<std::int64_t>> steps;
  std::vector<std::vector<std::int64_t>> facets;

  static PointedReduction build(const ActionSpec& a, IndexSet I) {
    std::vector<GroupElem> unit_gens;
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < a.n(); ++i) {
      if (I.contains(i)) unit_gens.push_back(a.omega[i]);
      else rest.push_back(i);
    }
    for (;;) {
      PointedReduction r;
      r.units = SubgroupDesc(a.group, unit_gens);
      r.to_pointed = QuotientMap(r.units);
      r.free_rank = r.to_pointed.target()->rank;
      std::vector<GroupElem> images;
      std::vector<std::vector<Integer>> free_parts;
      for (auto j : rest) {
        images.push_back(r.to_pointed.project(a.omega[j]));
        auto fp = images.back().free_part();
        free_parts.emplace_back(fp.begin(), fp.end());
      }
      r.cone = describe_cone(free_parts, r.free_rank);
      std::vector<std::size_t> still;
      for (std::size_t k = 0; k < rest.size(); ++k) {
        if (r.cone.in_lineality(free_parts[k])) unit_gens.push_back(a.omega[rest[k]]);
        else still.push_back(rest[k]);
      }
      if (still.size() != rest.size()) {
        rest = std::move(still);
        continue;
      }
      for (const auto& t : r.to_pointed.target()->torsion) r.torsion.push_back(to_int64(t));
      for (const auto& img : images) {
        std::vector<std::int64_t> s;
        for (const auto& c : img.coords()) s.push_back(to_int64(c));
        if (std::find(r.steps.begin(), r.steps.end(), s) == r.steps.end()) r.steps.push_back(std::move(s));
      }
      for (const auto& f : r.cone.facets) {
        std::vector<std::int64_t> v;
        for (const auto& c : f) v.push_back(to_int64(c, std::int64_t{1} << 20));
        r.facets.push_back(std::move(v));
      }
      return r;
    }
  }

  bool in_cone(const std::vector<std::int64_t>& x) const {
    for (const auto& f : facets) {
      __int128 s = 0;
      for (std::size_t k = 0; k < free_rank; ++k) s += static_cast<__int128>(f[k]) * x[k];
      if (s < 0) return false;
    }
    return true;
  }

  bool contains(const GroupElem& g, std::size_t max_states) const {
    GroupElem y = to_pointed.project(g);
    if (steps.empty()) return y.is_zero();
    if (y.is_zero()) return true;
    {
      auto fp = y.free_part();
      if (!cone.contains(std::vector<Integer>(fp.begin(), fp.end()))) return false;
    }
    std::vector<std::int64_t> start;
    for (const auto& c : y.coords()) start.push_back(to_int64(c));

    std::unordered_set<std::vector<std::int64_t>, Int64VecHash> seen;
    std::deque<std::vector<std::int64_t>> queue;
    seen.insert(start);
    queue.push_back(std::move(start));
    const std::size_t dim = free_rank + torsion.size();
    std::vector<std::int64_t> next(dim);
    while (!queue.empty()) {
      std::vector<std::int64_t> cur = std::move(queue.front());
      queue.pop_front();
      for (const auto& s : steps) {
        bool zero = true;
        for (std::size_t k = 0; k < free_rank; ++k) {
          next[k] = cur[k] - s[k];
          zero = zero && next[k] == 0;
        }
        for (std::size_t k = 0; k < torsion.size(); ++k) {
          std::int64_t v = (cur[free_rank + k] - s[free_rank + k]) % torsion[k];
          if (v < 0) v += torsion[k];
          next[free_rank + k] = v;
          zero = zero && v == 0;
        }
        if (zero) return true;
        if (!in_cone(next)) continue;
        if (seen.insert(next).second) {
          if (seen.size() > max_states)
            throw ResourceLimitError("semigroup membership search exceeded " + std::to_string(max_states) +
                                     " states for " + g.to_string());
          queue.push_back(next);
        }
      }
    }
    return false;
  }
};

}  // namespace detail

/// The semigroup Omega_I generated by omega_1..omega_n and -omega_i, i in I.
/// I may be empty (Omega itself).
class SemigroupDesc {
 public:
  SemigroupDesc(ActionPtr action, IndexSet indices, Limits limits = {})
      : action_(std::move(action)), indices_(indices), limits_(limits) {
    if (indices_.bound() > action_->n())
      throw DomainError("index set " + indices_.to_string() + " out of range for n = " + std::to_string(action_->n()));
    check_limits(*action_, limits_);
    check_semigroup_limits(*action_, limits_);
    generators_ = action_->omega;
    for (auto i : indices_.elements()) generators_.push_back(-action_->omega[i]);
    reduction_ = std::make_shared<const detail::PointedReduction>(detail::PointedReduction::build(*action_, indices_));
    const auto& g = action_->group;
    if (g->is_finite() && *g->order() <= limits_.max_finite_order) closure_ = build_closure();
  }

  const ActionSpec& action() const { return *action_; }
  const ActionPtr& action_ptr() const { return action_; }
  IndexSet indices() const { return indices_; }
  const Limits& limits() const { return limits_; }
  /// omega_1..omega_n followed by -omega_i for i in I.
  const std::vector<GroupElem>& generators() const { return generators_; }
  /// The full element set, present when the group is finite and small enough.
  const std::optional<ExplicitSubset>& explicit_closure() const { return closure_; }

  bool contains(const GroupElem& g) const {
    check_group(g);
    if (closure_) return closure_->contains(g);
    return reduction_->contains(g, limits_.max_search_states);
  }

  /// Same answer as contains(), always through the cone reduction.
  bool contains_symbolic(const GroupElem& g) const {
    check_group(g);
    return reduction_->contains(g, limits_.max_search_states);
  }

  /// Omega_I ∩ (-Omega_I).
  const SubgroupDesc& units() const { return reduction_->units; }

  /// Rank of the pointed part (free rank of Gamma / units).
  std::size_t pointed_rank() const { return reduction_->free_rank; }

 private:
  void check_group(const GroupElem& g) const {
    if (!(g.group() == *action_->group))
      throw DomainError("element " + g.to_string() + " is not in " + action_->group->to_string());
  }

  ExplicitSubset build_closure() const {
    auto e = std::make_shared<const FiniteEnumeration>(action_->group, limits_.max_finite_order);
    boost::dynamic_bitset<> seen(e->order());
    std::vector<std::size_t> stack{0};
    seen.set(0);
    while (!stack.empty()) {
      std::size_t cur = stack.back();
      stack.pop_back();
      for (const auto& h : generators_) {
        std::size_t nxt = e->add_index(cur, h);
        if (!seen.test(nxt)) {
          seen.set(nxt);
          stack.push_back(nxt);
        }
      }
    }
    return ExplicitSubset{std::move(e), std::move(seen)};
  }

  ActionPtr action_;
  IndexSet indices_;
  Limits limits_;
  std::vector<GroupElem> generators_;
  std::shared_ptr<const detail::PointedReduction> reduction_;
  std::optional<ExplicitSubset> closure_;
};

inline SemigroupDesc make_semigroup(ActionPtr action, IndexSet I, const Limits& limits = {}) {
  return SemigroupDesc(std::move(action), I, limits);
}

inline bool member(const SemigroupDesc& s, const GroupElem& g) { return s.contains(g); }

inline void require_same_action(const ActionSpec& a, const ActionSpec& b) {
  if (!(a == b)) throw DomainError("semigroups belong to different actions");
}

inline bool semigroups_equal(const SemigroupDesc& a, const SemigroupDesc& b) {
  require_same_action(a.action(), b.action());
  for (const auto& h : a.generators())
    if (!b.contains(h)) return false;
  for (const auto& h : b.generators())
    if (!a.contains(h)) return false;
  return true;
}

inline const SubgroupDesc& units_subgroup(const SemigroupDesc& s) { return s.units(); }

/// Memoized Omega_I for every I over one action. Shared by the set types.
class SemigroupFamily {
 public:
  SemigroupFamily(ActionPtr action, Limits limits = {}) : action_(std::move(action)), limits_(limits) {
    check_limits(*action_, limits_);
  }

  const ActionSpec& action() const { return *action_; }
  const ActionPtr& action_ptr() const { return action_; }
  const GroupPtr& group() const { return action_->group; }
  std::size_t n() const { return action_->n(); }
  const GroupElem& omega(std::size_t i) const { return action_->omega.at(i); }
  const Limits& limits() const { return limits_; }

  const SemigroupDesc& semigroup(IndexSet I) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(I.bits());
    if (it == cache_.end()) it = cache_.emplace(I.bits(), std::make_unique<SemigroupDesc>(action_, I, limits_)).first;
    return *it->second;
  }

 private:
  ActionPtr action_;
  Limits limits_;
  mutable std::mutex mutex_;
  mutable std::map<std::uint32_t, std::unique_ptr<SemigroupDesc>> cache_;
};

using FamilyPtr = std::shared_ptr<const SemigroupFamily>;

inline FamilyPtr make_family(ActionPtr action, const Limits& limits = {}) {
  return std::make_shared<const SemigroupFamily>(std::move(action), limits);
}

/// Per-index verdict of the dichotomy: omega_i has infinite order, or some
/// -omega_j (j != i) lies in Omega_{i}.
struct IndexStatus {
  enum class Branch { NonTorsion, Escape, Fails };
  Branch branch = Branch::NonTorsion;
  std::optional<std::size_t> escape_witness;
  std::optional<Integer> order;
};

struct ConditionReport {
  bool holds = true;
  std::optional<std::size_t> failing_index;  // zero-based
  std::optional<Integer> K;
  std::vector<IndexStatus> per_index;
};

/// If index i fails, every other weight has infinite order (a torsion weight
/// omega_j would give -omega_j = (ord-1) omega_j in Omega), so at most one
/// index can fail.
inline ConditionReport condition_check(const SemigroupFamily& family) {
  ConditionReport report;
  const auto& a = family.action();
  for (std::size_t i = 0; i < a.n(); ++i) {
    IndexStatus st;
    st.order = order_of(a.omega[i]);
    if (!st.order) {
      st.branch = IndexStatus::Branch::NonTorsion;
    } else {
      const auto& omega_i = family.semigroup(IndexSet{i});
      st.branch = IndexStatus::Branch::Fails;
      for (std::size_t j = 0; j < a.n(); ++j) {
        if (j == i) continue;
        if (omega_i.contains(-a.omega[j])) {
          st.branch = IndexStatus::Branch::Escape;
          st.escape_witness = j;
          break;
        }
      }
    }
    if (st.branch == IndexStatus::Branch::Fails) {
      if (report.failing_index) throw Error("two indices fail the escape condition; this cannot happen");
      report.holds = false;
      report.failing_index = i;
      report.K = st.order;
    }
    report.per_index.push_back(std::move(st));
  }
  return report;
}

}  // namespace cuntz
