#pragma once

#include <cctype>
#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cuntz/errors.hpp"
#include "cuntz/integer.hpp"

namespace cuntz {

/// Z^rank x Z/torsion[0] x ... ; every torsion order is >= 2.
struct GroupSpec {
  std::size_t rank = 0;
  std::vector<Integer> torsion;

  std::size_t dimension() const { return rank + torsion.size(); }
  bool is_finite() const { return rank == 0; }
  bool is_trivial() const { return rank == 0 && torsion.empty(); }

  /// Cardinality, or nullopt when the group is infinite.
  std::optional<Integer> order() const {
    if (rank) return std::nullopt;
    Integer n = 1;
    for (const auto& k : torsion) n *= k;
    return n;
  }

  /// lcm of the torsion orders (1 for a torsion-free group).
  Integer exponent() const {
    Integer e = 1;
    for (const auto& k : torsion) e = lcm(e, k);
    return e;
  }

  bool operator==(const GroupSpec&) const = default;

  std::string to_string() const {
    if (is_trivial()) return "0";
    std::string out;
    if (rank == 1) out = "Z";
    else if (rank > 1) out = "Z^" + std::to_string(rank);
    for (const auto& k : torsion) out += (out.empty() ? "" : " x ") + ("Z/" + k.str());
    return out;
  }
};

using GroupPtr = std::shared_ptr<const GroupSpec>;

inline GroupPtr make_group(std::size_t rank, std::vector<Integer> torsion = {}) {
  for (const auto& k : torsion)
    if (k < 2) throw ParseError("torsion orders must be at least 2, got " + k.str());
  return std::make_shared<const GroupSpec>(GroupSpec{rank, std::move(torsion)});
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_top_level(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    else if (c == ')' || c == ']' || c == '}') --depth;
    else if (c == sep && depth == 0) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(s.substr(start));
  return parts;
}

inline std::vector<Integer> parse_integer_list(std::string_view s, char open, char close) {
  s = trim(s);
  if (s.size() < 2 || s.front() != open || s.back() != close)
    throw ParseError("expected a list in " + std::string(1, open) + "..." + std::string(1, close) +
                     ", got '" + std::string(s) + "'");
  std::string_view body = trim(s.substr(1, s.size() - 2));
  std::vector<Integer> out;
  if (body.empty()) return out;
  for (auto part : split_top_level(body, ',')) out.push_back(parse_integer(part));
  return out;
}

}  // namespace detail

/// Accepts "rank=1, torsion=[2]" with the keys separated by commas,
/// semicolons or newlines. A missing key defaults to 0 / [].
inline GroupSpec parse_group_spec(std::string_view text) {
  GroupSpec spec;
  std::string normalized(text);
  for (char& c : normalized)
    if (c == '\n' || c == ';') c = ',';
  bool saw_rank = false, saw_torsion = false;
  for (auto item : detail::split_top_level(normalized, ',')) {
    item = detail::trim(item);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value in group spec, got '" + std::string(item) + "'");
    auto key = detail::trim(item.substr(0, eq));
    auto value = detail::trim(item.substr(eq + 1));
    if (key == "rank") {
      if (saw_rank) throw ParseError("duplicate rank in group spec");
      Integer r = parse_integer(value);
      if (r < 0) throw ParseError("rank must be non-negative");
      if (r > 64) throw ParseError("rank " + r.str() + " is unreasonably large");
      spec.rank = r.convert_to<std::size_t>();
      saw_rank = true;
    } else if (key == "torsion") {
      if (saw_torsion) throw ParseError("duplicate torsion in group spec");
      spec.torsion = detail::parse_integer_list(value, '[', ']');
      for (const auto& k : spec.torsion)
        if (k < 2) throw ParseError("torsion orders must be at least 2, got " + k.str());
      saw_torsion = true;
    } else {
      throw ParseError("unknown group spec key '" + std::string(key) + "'");
    }
  }
  return spec;
}

/// An element of a fixed group; torsion coordinates are kept reduced.
class GroupElem {
 public:
  GroupElem() = default;
  GroupElem(GroupPtr group, std::vector<Integer> coords) : group_(std::move(group)), coords_(std::move(coords)) {
    if (!group_) throw DomainError("group element without a group");
    if (coords_.size() != group_->dimension())
      throw DomainError("element has " + std::to_string(coords_.size()) + " coordinates, group " +
                        group_->to_string() + " needs " + std::to_string(group_->dimension()));
    reduce();
  }
  GroupElem(GroupPtr group, std::initializer_list<long long> coords)
      : GroupElem(std::move(group), std::vector<Integer>(coords.begin(), coords.end())) {}

  static GroupElem zero(GroupPtr group) {
    const std::size_t dim = group->dimension();
    return GroupElem(std::move(group), std::vector<Integer>(dim));
  }

  /// k-th standard generator (1 in coordinate k).
  static GroupElem unit(GroupPtr group, std::size_t k) {
    std::vector<Integer> c(group->dimension());
    c.at(k) = 1;
    return GroupElem(std::move(group), std::move(c));
  }

  const GroupSpec& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  const std::vector<Integer>& coords() const { return coords_; }
  const Integer& operator[](std::size_t k) const { return coords_[k]; }
  std::size_t dimension() const { return coords_.size(); }

  std::span<const Integer> free_part() const { return std::span(coords_).first(group_->rank); }
  std::span<const Integer> torsion_part() const { return std::span(coords_).subspan(group_->rank); }

  bool is_zero() const {
    for (const auto& c : coords_)
      if (c != 0) return false;
    return true;
  }

  bool same_group(const GroupElem& o) const {
    return group_ == o.group_ || (group_ && o.group_ && *group_ == *o.group_);
  }

  friend bool operator==(const GroupElem& a, const GroupElem& b) {
    return a.same_group(b) && a.coords_ == b.coords_;
  }
  /// Lexicographic on coordinates; only meaningful within one group.
  friend bool operator<(const GroupElem& a, const GroupElem& b) { return a.coords_ < b.coords_; }

  friend GroupElem operator+(const GroupElem& a, const GroupElem& b) {
    a.require_same(b);
    std::vector<Integer> c(a.coords_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coords_[k] + b.coords_[k];
    return GroupElem(a.group_, std::move(c));
  }
  friend GroupElem operator-(const GroupElem& a) {
    std::vector<Integer> c(a.coords_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = -a.coords_[k];
    return GroupElem(a.group_, std::move(c));
  }
  friend GroupElem operator-(const GroupElem& a, const GroupElem& b) { return a + (-b); }
  friend GroupElem operator*(const Integer& m, const GroupElem& a) {
    std::vector<Integer> c(a.coords_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = m * a.coords_[k];
    return GroupElem(a.group_, std::move(c));
  }

  void require_same(const GroupElem& o) const {
    if (!same_group(o))
      throw DomainError("elements belong to different groups: " + (group_ ? group_->to_string() : "?") +
                        " and " + (o.group_ ? o.group_->to_string() : "?"));
  }

  /// "5" for a one-dimensional group, "(1, 0)" otherwise.
  std::string to_string() const {
    if (coords_.size() == 1) return coords_[0].str();
    std::string out = "(";
    for (std::size_t k = 0; k < coords_.size(); ++k) out += (k ? ", " : "") + coords_[k].str();
    return out + ")";
  }

 private:
  void reduce() {
    for (std::size_t j = 0; j < group_->torsion.size(); ++j) {
      Integer& c = coords_[group_->rank + j];
      c = floor_mod(c, group_->torsion[j]);
    }
  }

  GroupPtr group_;
  std::vector<Integer> coords_;
};

inline GroupElem add(const GroupElem& a, const GroupElem& b) { return a + b; }
inline GroupElem neg(const GroupElem& a) { return -a; }
inline GroupElem scale(const Integer& m, const GroupElem& a) { return m * a; }

/// Order of `a`, or nullopt when it has infinite order.
inline std::optional<Integer> order_of(const GroupElem& a) {
  for (const auto& c : a.free_part())
    if (c != 0) return std::nullopt;
  Integer ord = 1;
  const auto& t = a.group().torsion;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const Integer& c = a.torsion_part()[j];
    ord = lcm(ord, t[j] / gcd(c, t[j]));
  }
  return ord;
}

/// Parses "5", "(1, 0)" or "()" for the trivial group.
inline GroupElem parse_element(const GroupPtr& group, std::string_view text) {
  auto s = detail::trim(text);
  std::vector<Integer> coords;
  if (!s.empty() && s.front() == '(') coords = detail::parse_integer_list(s, '(', ')');
  else coords.push_back(parse_integer(s));
  if (coords.size() != group->dimension())
    throw ParseError("element '" + std::string(s) + "' has " + std::to_string(coords.size()) +
                     " coordinates, expected " + std::to_string(group->dimension()));
  return GroupElem(group, std::move(coords));
}

/// Dense indexing of a finite group, first coordinate most significant.
class FiniteEnumeration {
 public:
  explicit FiniteEnumeration(GroupPtr group, std::size_t max_order) : group_(std::move(group)) {
    if (!group_->is_finite()) throw UnsupportedError("cannot enumerate infinite group " + group_->to_string());
    Integer ord = *group_->order();
    if (ord > max_order)
      throw ResourceLimitError("group order " + ord.str() + " exceeds the limit " + std::to_string(max_order));
    order_ = ord.convert_to<std::size_t>();
    for (const auto& k : group_->torsion) moduli_.push_back(k.convert_to<std::size_t>());
  }

  std::size_t order() const { return order_; }
  const GroupPtr& group() const { return group_; }

  std::size_t index_of(const GroupElem& g) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < moduli_.size(); ++j) idx = idx * moduli_[j] + g[j].convert_to<std::size_t>();
    return idx;
  }

  GroupElem element_at(std::size_t idx) const {
    std::vector<Integer> c(moduli_.size());
    for (std::size_t j = moduli_.size(); j-- > 0;) {
      c[j] = idx % moduli_[j];
      idx /= moduli_[j];
    }
    return GroupElem(group_, std::move(c));
  }

  /// idx(g + h) as a table-free computation on indices.
  std::size_t add_index(std::size_t a, const GroupElem& h) const {
    std::size_t out = 0, mult = 1;
    for (std::size_t j = moduli_.size(); j-- > 0;) {
      std::size_t digit = a % moduli_[j];
      a /= moduli_[j];
      std::size_t hj = h[j].convert_to<std::size_t>();
      out += ((digit + hj) % moduli_[j]) * mult;
      mult *= moduli_[j];
    }
    return out;
  }

 private:
  GroupPtr group_;
  std::size_t order_ = 1;
  std::vector<std::size_t> moduli_;
};

}  // namespace cuntz
