#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cuntz/abelian_group.hpp"
#include "cuntz/matrix.hpp"
#include "cuntz/normal_form.hpp"

namespace cuntz {

namespace detail {

inline std::vector<Integer> lift_coords(const GroupElem& g) { return g.coords(); }

// Relation lattice of the group inside Z^dimension.
inline std::vector<std::vector<Integer>> relation_rows(const GroupSpec& g) {
  std::vector<std::vector<Integer>> rows;
  for (std::size_t j = 0; j < g.torsion.size(); ++j) {
    std::vector<Integer> r(g.dimension());
    r[g.rank + j] = g.torsion[j];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace detail

/// Subgroup of a group, stored as the HNF of its preimage lattice in Z^m.
class SubgroupDesc {
 public:
  SubgroupDesc() = default;
  SubgroupDesc(GroupPtr group, std::vector<GroupElem> generators)
      : group_(std::move(group)), generators_(std::move(generators)) {
    auto rows = detail::relation_rows(*group_);
    for (const auto& g : generators_) {
      if (!(g.group() == *group_)) throw DomainError("subgroup generator lies in another group");
      rows.push_back(detail::lift_coords(g));
    }
    basis_ = hermite_normal_form(IntMatrix::from_rows(rows, group_->dimension()));
  }

  const GroupPtr& group() const { return group_; }
  const std::vector<GroupElem>& generators() const { return generators_; }
  const IntMatrix& lattice_basis() const { return basis_; }

  bool contains(const GroupElem& g) const {
    if (!(g.group() == *group_)) throw DomainError("element lies in another group");
    std::vector<Integer> v = detail::lift_coords(g);
    std::size_t col = 0;
    for (std::size_t r = 0; r < basis_.rows(); ++r) {
      std::size_t pivot = 0;
      while (basis_(r, pivot) == 0) ++pivot;
      for (; col < pivot; ++col)
        if (v[col] != 0) return false;
      const Integer& p = basis_(r, pivot);
      if (v[pivot] % p != 0) return false;
      Integer q = v[pivot] / p;
      if (q != 0)
        for (std::size_t j = pivot; j < v.size(); ++j) v[j] -= q * basis_(r, j);
      col = pivot + 1;
    }
    for (; col < v.size(); ++col)
      if (v[col] != 0) return false;
    return true;
  }

  bool is_whole_group() const { return basis_ == IntMatrix::identity(group_->dimension()); }

  bool is_trivial() const {
    for (const auto& g : generators_)
      if (!g.is_zero()) return false;
    return true;
  }

  /// Same group and same subset.
  friend bool operator==(const SubgroupDesc& a, const SubgroupDesc& b) {
    return *a.group_ == *b.group_ && a.basis_ == b.basis_;
  }

 private:
  GroupPtr group_;
  std::vector<GroupElem> generators_;
  IntMatrix basis_;
};

inline SubgroupDesc subgroup_generated(const GroupPtr& group, std::span<const GroupElem> gens) {
  return SubgroupDesc(group, std::vector<GroupElem>(gens.begin(), gens.end()));
}

/// Projection Gamma -> Gamma / H in Smith coordinates, with a set-theoretic
/// section `lift` (project(lift(y)) == y).
class QuotientMap {
 public:
  QuotientMap() = default;
  explicit QuotientMap(const SubgroupDesc& h) : source_(h.group()) {
    const std::size_t m = source_->dimension();
    SmithDecomposition s = smith_normal_form(h.lattice_basis());
    V_ = std::move(s.V);
    V_inverse_ = std::move(s.V_inverse);
    std::vector<Integer> torsion;
    for (std::size_t i = 0; i < s.rank; ++i)
      if (s.D(i, i) > 1) {
        torsion_cols_.push_back(i);
        torsion.push_back(s.D(i, i));
      }
    for (std::size_t i = s.rank; i < m; ++i) free_cols_.push_back(i);
    target_ = make_group(free_cols_.size(), std::move(torsion));
  }

  const GroupPtr& source() const { return source_; }
  const GroupPtr& target() const { return target_; }

  GroupElem project(const GroupElem& g) const {
    if (!(g.group() == *source_)) throw DomainError("projection applied to an element of another group");
    std::vector<Integer> x = detail::lift_coords(g) * V_;
    std::vector<Integer> y;
    y.reserve(target_->dimension());
    for (auto c : free_cols_) y.push_back(x[c]);
    for (auto c : torsion_cols_) y.push_back(x[c]);
    return GroupElem(target_, std::move(y));
  }

  GroupElem lift(const GroupElem& y) const {
    if (!(y.group() == *target_)) throw DomainError("lift applied to an element of another group");
    std::vector<Integer> z(source_->dimension());
    std::size_t k = 0;
    for (auto c : free_cols_) z[c] = y[k++];
    for (auto c : torsion_cols_) z[c] = y[k++];
    return GroupElem(source_, z * V_inverse_);
  }

 private:
  GroupPtr source_;
  GroupPtr target_;
  IntMatrix V_;
  IntMatrix V_inverse_;
  std::vector<std::size_t> free_cols_;
  std::vector<std::size_t> torsion_cols_;
};

inline QuotientMap quotient(const SubgroupDesc& h) { return QuotientMap(h); }

}  // namespace cuntz
