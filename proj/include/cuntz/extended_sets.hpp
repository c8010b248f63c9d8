#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cuntz/errors.hpp"
#include "cuntz/invariant_sets.hpp"

namespace cuntz {

/// A rational point of the circle, stored as a turn in [0, 1). The unit
/// 1 ∈ T is 0/1 and -1 ∈ T is 1/2; the group law is addition of turns.
class Angle {
 public:
  Angle() = default;
  explicit Angle(const Rational& turn) : turn_(turn) { normalize(); }
  Angle(long long p, long long q) {
    if (q == 0) throw ParseError("angle with zero denominator");
    turn_ = Rational(p, q);
    normalize();
  }

  const Rational& turn() const { return turn_; }
  Integer numerator() const { return boost::multiprecision::numerator(turn_); }
  Integer denominator() const { return boost::multiprecision::denominator(turn_); }

  friend Angle operator+(const Angle& a, const Angle& b) { return Angle(a.turn_ + b.turn_); }
  friend Angle operator-(const Angle& a, const Angle& b) { return Angle(a.turn_ - b.turn_); }
  friend Angle operator-(const Angle& a) { return Angle(-a.turn_); }
  friend bool operator==(const Angle& a, const Angle& b) { return a.turn_ == b.turn_; }
  friend bool operator<(const Angle& a, const Angle& b) { return a.turn_ < b.turn_; }

  std::string to_string() const { return numerator().str() + "/" + denominator().str(); }

 private:
  void normalize() {
    Integer p = numerator(), q = denominator();
    turn_ = Rational(floor_mod(p, q), q);
  }
  Rational turn_{0};
};

/// "p/q" or an integer, optionally in double quotes.
inline Angle parse_angle(std::string_view text) {
  auto s = detail::trim(text);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = detail::trim(s.substr(1, s.size() - 2));
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Angle(Rational(parse_integer(s)));
  Integer p = parse_integer(s.substr(0, slash)), q = parse_integer(s.substr(slash + 1));
  if (q == 0) throw ParseError("angle with zero denominator: " + std::string(s));
  return Angle(Rational(p, q));
}

/// The action with its unique failing index f, K = ord(omega_f) and
/// Gamma' = Gamma / <omega_f>. Set operations keep the original indexing;
/// `permutation` and `permuted` record the reordering that puts f first.
struct NormalizedFailingAction {
  FamilyPtr family;
  std::size_t failing = 0;
  std::vector<std::size_t> permutation;  // position k of `permuted` holds original index permutation[k]
  ActionPtr permuted;
  Integer K;
  QuotientMap gamma_prime;

  const GroupPtr& gamma_prime_group() const { return gamma_prime.target(); }
  GroupElem project(const GroupElem& g) const { return gamma_prime.project(g); }
  GroupElem lift(const GroupElem& y) const { return gamma_prime.lift(y); }
};

using NormalizedPtr = std::shared_ptr<const NormalizedFailingAction>;

inline NormalizedPtr normalize_failing(const FamilyPtr& family, const ConditionReport& report) {
  if (report.holds) throw PreconditionError("the condition holds; there is no failing index to normalize");
  auto n = std::make_shared<NormalizedFailingAction>();
  n->family = family;
  n->failing = *report.failing_index;
  n->K = *report.K;
  n->permutation.push_back(n->failing);
  for (std::size_t i = 0; i < family->n(); ++i)
    if (i != n->failing) n->permutation.push_back(i);
  std::vector<GroupElem> omega;
  for (auto i : n->permutation) omega.push_back(family->omega(i));
  n->permuted = std::make_shared<const ActionSpec>(ActionSpec{family->group(), std::move(omega)});
  std::vector<GroupElem> gen{family->omega(n->failing)};
  n->gamma_prime = QuotientMap(subgroup_generated(family->group(), gen));
  return n;
}

inline NormalizedPtr normalize_failing(const FamilyPtr& family) { return normalize_failing(family, condition_check(*family)); }

/// Finitary subset of Gamma' x T: finitely many points with finite angle sets,
/// plus full circles over a finitary set. The full part is kept as a subset
/// of Gamma; every finitary set over this action is <omega_f>-saturated
/// (omega_f has finite order and lies in each Omega_I), so it is the
/// preimage of its image in Gamma'.
class ExtSet {
 public:
  using PointMap = std::map<GroupElem, std::set<Angle>>;

  ExtSet(NormalizedPtr ctx, PointMap points, FinitarySet full)
      : ctx_(std::move(ctx)), points_(std::move(points)), full_(std::move(full)) {
    for (const auto& [g, _] : points_)
      if (!(g.group() == *ctx_->gamma_prime_group())) throw DomainError("point " + g.to_string() + " is not in Gamma'");
  }
  static ExtSet empty(NormalizedPtr ctx) {
    FinitarySet f(ctx->family);
    return ExtSet(std::move(ctx), {}, std::move(f));
  }

  const NormalizedPtr& context() const { return ctx_; }
  const PointMap& points() const { return points_; }
  const FinitarySet& full() const { return full_; }

  bool fiber_full(const GroupElem& gp) const { return full_.contains(ctx_->lift(gp)); }
  bool support_contains(const GroupElem& gp) const { return points_.count(gp) > 0 || fiber_full(gp); }

  bool contains(const GroupElem& gp, const Angle& theta) const {
    if (fiber_full(gp)) return true;
    auto it = points_.find(gp);
    return it != points_.end() && it->second.count(theta) > 0;
  }

  /// Drops point fibres already covered by full circles.
  ExtSet canonical() const {
    PointMap p;
    for (const auto& [g, angles] : points_)
      if (!angles.empty() && !fiber_full(g)) p.emplace(g, angles);
    return ExtSet(ctx_, std::move(p), full_.simplified());
  }

  bool subset_of(const ExtSet& o) const {
    require_same(o);
    if (!full_.subset_of(o.full_)) return false;
    for (const auto& [g, angles] : points_) {
      if (o.fiber_full(g) || fiber_full(g)) {
        if (!o.fiber_full(g)) return false;
        continue;
      }
      for (const auto& a : angles)
        if (!o.contains(g, a)) return false;
    }
    return true;
  }

  friend bool operator==(const ExtSet& a, const ExtSet& b) { return a.subset_of(b) && b.subset_of(a); }

  ExtSet united(const ExtSet& o) const {
    require_same(o);
    PointMap p = points_;
    for (const auto& [g, angles] : o.points_) p[g].insert(angles.begin(), angles.end());
    return ExtSet(ctx_, std::move(p), full_.united(o.full_));
  }

  /// Re-parseable expression built from full(...) and fiber(...).
  std::string to_string() const {
    std::vector<std::string> parts;
    if (!full_.is_empty() || points_.empty()) parts.push_back("full(" + full_.to_string() + ")");
    for (const auto& [g, angles] : points_)
      for (const auto& a : angles) parts.push_back("fiber(" + ctx_->lift(g).to_string() + ",\"" + a.to_string() + "\")");
    if (parts.size() == 1) return parts[0];
    std::string out = "union(";
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
    return out + ")";
  }

 private:
  void require_same(const ExtSet& o) const {
    if (ctx_ != o.ctx_ && !(ctx_->family->action() == o.ctx_->family->action()))
      throw DomainError("extended sets belong to different actions");
  }

  NormalizedPtr ctx_;
  PointMap points_;
  FinitarySet full_;
};

/// Y_{([gamma], theta)}: the point itself plus full circles over the image of
/// (gamma + Omega) minus (gamma + <omega_f>), which is ⋃_{i != f} (gamma + omega_i + Omega).
/// The two agree because gamma + omega_i + x = gamma + k omega_f would put
/// -omega_i in Omega_{f}, which the failing condition rules out.
inline ExtSet make_Y_point(const NormalizedPtr& ctx, const GroupElem& gp, const Angle& theta) {
  GroupElem gamma = ctx->lift(gp);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < ctx->family->n(); ++i)
    if (i != ctx->failing) atoms.push_back(Atom{gamma + ctx->family->omega(i), {}});
  ExtSet::PointMap p;
  p[ctx->project(gamma)].insert(theta);
  return ExtSet(ctx, std::move(p), FinitarySet(ctx->family, std::move(atoms)));
}

/// A point class [gamma] whose successors [gamma + omega_i] (i != f) do not
/// carry full circles. Full circles are closed under these successors already.
inline std::optional<GroupElem> invariance_violation_ext(const ExtSet& y) {
  const auto& ctx = *y.context();
  for (const auto& [g, angles] : y.points()) {
    if (angles.empty()) continue;
    GroupElem gamma = ctx.lift(g);
    for (std::size_t i = 0; i < ctx.family->n(); ++i)
      if (i != ctx.failing && !y.full().contains(gamma + ctx.family->omega(i))) return g;
  }
  return std::nullopt;
}

inline bool is_invariant_ext(const ExtSet& y) { return !invariance_violation_ext(y); }

/// rho_t: theta is in rho_t(Y) iff t*theta is in Y, so angles move by -t.
inline ExtSet rotate(const ExtSet& y, const Angle& t) {
  ExtSet::PointMap p;
  for (const auto& [g, angles] : y.points())
    for (const auto& a : angles) p[g].insert(a - t);
  return ExtSet(y.context(), std::move(p), y.full());
}

inline void require_invariant_ext(const ExtSet& y) {
  if (auto w = invariance_violation_ext(y))
    throw PreconditionError("the extended set is not invariant at class " + w->to_string(), w->to_string());
}

/// Preimage in Gamma of the classes with non-empty fibre. For an invariant Y
/// the preimage gamma + <omega_f> of a point class together with the full
/// part is the same as adding the atom gamma + Omega.
inline FinitarySet project_to_gamma(const ExtSet& y) {
  require_invariant_ext(y);
  std::vector<Atom> atoms = y.full().atoms();
  for (const auto& [g, angles] : y.points())
    if (!angles.empty() && !y.fiber_full(g)) atoms.push_back(Atom{y.context()->lift(g), {}});
  return FinitarySet(y.context()->family, std::move(atoms));
}

/// [X] x T for an invariant X.
inline ExtSet lift_X(const NormalizedPtr& ctx, const FinitarySet& x) {
  if (auto w = x.invariance_violation())
    throw PreconditionError("the set is not invariant: " + w->to_string() + " has no predecessor", w->to_string());
  return ExtSet(ctx, {}, x);
}

/// Y|_Gamma: points gamma with ([gamma - omega_i], theta) in Y for some i != f.
inline FinitarySet restrict_to_gamma_margin(const ExtSet& y) {
  FinitarySet support = project_to_gamma(y);
  const auto& ctx = *y.context();
  FinitarySet out(ctx.family);
  for (std::size_t i = 0; i < ctx.family->n(); ++i)
    if (i != ctx.failing) out = out.united(support.translated(ctx.family->omega(i)));
  return out;
}

/// All points of X with no predecessor through a weight other than omega_f
/// (the candidates of is_bad), deduplicated by class in Gamma'.
inline std::vector<GroupElem> bad_points(const FinitarySet& x, const NormalizedFailingAction& ctx) {
  const auto& fam = *x.family();
  const std::size_t fi = ctx.failing;
  const std::size_t K = ctx.K.convert_to<std::size_t>();
  std::vector<GroupElem> out;
  for (const auto& a : x.atoms()) {
    if (!a.indices.subset_of(IndexSet{fi})) continue;
    GroupElem g = a.base;
    for (std::size_t k = 0; k < K; ++k, g = g + fam.omega(fi)) {
      bool other = false;
      for (std::size_t i = 0; i < fam.n() && !other; ++i)
        if (i != fi) other = x.contains(g - fam.omega(i));
      if (!other && std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
    }
  }
  return out;
}

/// ([X] x {1}) ∪ ([X'] x T) with X' = ⋃_{i != f} (X + omega_i): an invariant
/// set strictly inside [X] x T exactly when X is bad, projecting back to X.
inline ExtSet bad_extension(const NormalizedPtr& ctx, const FinitarySet& x) {
  if (auto w = x.invariance_violation())
    throw PreconditionError("the set is not invariant: " + w->to_string() + " has no predecessor", w->to_string());
  FinitarySet xp(ctx->family);
  for (std::size_t i = 0; i < ctx->family->n(); ++i)
    if (i != ctx->failing) xp = xp.united(x.translated(ctx->family->omega(i)));
  ExtSet::PointMap p;
  for (const auto& g : bad_points(x, *ctx)) p[ctx->project(g)].insert(Angle());
  return ExtSet(ctx, std::move(p), xp);
}

}  // namespace cuntz
