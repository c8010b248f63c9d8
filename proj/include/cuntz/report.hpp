#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cuntz/classify.hpp"
#include "cuntz/io.hpp"
#include "cuntz/ktheory.hpp"

namespace cuntz {

using Json = nlohmann::ordered_json;

enum class Format { Text, Json, Dot };

inline Format parse_format(std::string_view s) {
  if (s == "text") return Format::Text;
  if (s == "json") return Format::Json;
  if (s == "dot") return Format::Dot;
  throw ParseError("unknown format '" + std::string(s) + "' (text, json or dot)");
}

/// Small integers as JSON numbers, anything wider as a decimal string.
inline Json json_integer(const Integer& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return v.convert_to<std::int64_t>();
  return v.str();
}

inline std::string render(const Json& j) { return j.dump() + "\n"; }

inline void require_not_dot(Format f, const std::string& command) {
  if (f == Format::Dot) throw ParseError("--format dot is only available for the ideals command, not " + command);
}

// ---------------------------------------------------------------------------
// analyze

inline Json analyze_json(const FamilyPtr& f) {
  Json j;
  j["simple"] = is_simple(*f);
  j["primitive"] = is_primitive(*f);
  ConditionReport c = condition_check(*f);
  Json cond;
  cond["holds"] = c.holds;
  if (!c.holds) {
    cond["failing_index"] = *c.failing_index + 1;
    cond["K"] = json_integer(*c.K);
  }
  j["condition"] = cond;
  j["spectrum"] = strong_connes_spectrum(f).description;
  Json prim = Json::array();
  for (const auto& comp : primitive_ideal_space(*f).components)
    prim.push_back(Json{{"I", comp.rep.to_string()}, {"space", comp.description()}});
  j["prim"] = prim;
  if (f->group()->is_finite()) j["ideals"] = json_integer(ideal_lattice_finite(*f).count);
  return j;
}

inline std::string analyze_text(const FamilyPtr& f) {
  Json j = analyze_json(f);
  std::ostringstream o;
  o << "action: " << f->action().to_string() << "\n";
  o << "simple: " << (j["simple"].get<bool>() ? "yes" : "no") << "\n";
  o << "primitive: " << (j["primitive"].get<bool>() ? "yes" : "no") << "\n";
  if (j["condition"]["holds"].get<bool>()) {
    o << "condition: holds for every index; all ideals are gauge invariant\n";
  } else {
    o << "condition: fails at index " << j["condition"]["failing_index"].dump() << " (K = " << j["condition"]["K"].dump()
      << ")\n";
  }
  o << "strong Connes spectrum: " << j["spectrum"].get<std::string>() << "\n";
  o << "primitive ideals:\n";
  for (const auto& p : j["prim"])
    o << "  " << p["I"].get<std::string>() << ": " << p["space"].get<std::string>() << "\n";
  if (j.contains("ideals")) o << "ideals: " << j["ideals"].dump() << "\n";
  if (!j["condition"]["holds"].get<bool>())
    o << "note: ideals correspond to invariant closed subsets of Gamma' x T; for invariant X1 ⊂ X2 with no\n"
         "      bad points in between, I_X2 / I_X1 = K ⊗ C((X2 \\ X1) x T)\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// ideals

struct IdealListing {
  IdealLatticeFinite lattice;
  bool listed = false;  // false when the count exceeds the node cap
  std::vector<std::uint64_t> masks;
};

inline IdealListing list_ideals(const SemigroupFamily& f) {
  IdealListing l{ideal_lattice_finite(f), false, {}};
  const std::size_t k = l.lattice.coset_reps.size();
  if (l.lattice.count <= f.limits().max_dot_nodes && k < 63) {
    l.listed = true;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) l.masks.push_back(m);
  }
  return l;
}

inline std::string ideal_label(const IdealListing& l, std::uint64_t mask) {
  if (!mask) return "∅";
  std::string out;
  for (std::size_t c = 0; c < l.lattice.coset_reps.size(); ++c)
    if ((mask >> c) & 1u) out += (out.empty() ? "" : " ∪ ") + l.lattice.coset_reps[c].to_string() + "+Ω";
  return out;
}

inline std::vector<std::string> ideal_elements(const SemigroupFamily& f, const IdealListing& l, std::uint64_t mask) {
  auto e = enumerate_group(f);
  std::vector<std::string> out;
  for (std::size_t k = 0; k < e->order(); ++k) {
    GroupElem g = e->element_at(k);
    auto key = l.lattice.map.project(g);
    for (std::size_t c = 0; c < l.lattice.coset_reps.size(); ++c)
      if (((mask >> c) & 1u) && l.lattice.map.project(l.lattice.coset_reps[c]) == key) out.push_back(g.to_string());
  }
  return out;
}

inline std::string ideals_output(const FamilyPtr& f, Format fmt) {
  auto l = list_ideals(*f);
  const std::string quotient = l.lattice.map.target()->to_string();
  if (fmt == Format::Dot) {
    std::ostringstream o;
    o << "digraph ideals {\n  rankdir=BT;\n  node [shape=box];\n";
    if (!l.listed) {
      o << "  summary [label=\"" << l.lattice.count.str() << " ideals; Γ/Ω = " << quotient << "\"];\n}\n";
      return o.str();
    }
    for (auto m : l.masks) o << "  n" << m << " [label=\"" << ideal_label(l, m) << "\"];\n";
    for (auto m : l.masks)
      for (std::size_t c = 0; c < l.lattice.coset_reps.size(); ++c)
        if (!((m >> c) & 1u)) o << "  n" << m << " -> n" << (m | (std::uint64_t{1} << c)) << ";\n";
    o << "}\n";
    return o.str();
  }
  Json j;
  j["group"] = f->group()->to_string();
  j["quotient"] = quotient;
  j["count"] = json_integer(l.lattice.count);
  Json reps = Json::array();
  for (const auto& r : l.lattice.coset_reps) reps.push_back(r.to_string());
  j["cosets"] = reps;
  j["listed"] = l.listed;
  if (l.listed) {
    Json ideals = Json::array();
    for (auto m : l.masks) {
      Json cos = Json::array();
      for (std::size_t c = 0; c < l.lattice.coset_reps.size(); ++c)
        if ((m >> c) & 1u) cos.push_back(l.lattice.coset_reps[c].to_string());
      ideals.push_back(Json{{"cosets", cos}, {"elements", ideal_elements(*f, l, m)}});
    }
    j["ideals"] = ideals;
  }
  if (fmt == Format::Json) return render(j);
  std::ostringstream o;
  o << "Γ = " << j["group"].get<std::string>() << ", Γ/Ω = " << quotient << ", " << l.lattice.count.str() << " ideals\n";
  if (!l.listed) {
    o << "(listing suppressed above " << f->limits().max_dot_nodes << " ideals)\n";
    return o.str();
  }
  for (std::size_t k = 0; k < l.masks.size(); ++k) {
    auto elems = ideal_elements(*f, l, l.masks[k]);
    std::string es;
    for (const auto& e : elems) es += (es.empty() ? "" : ", ") + e;
    o << "  I" << k << ": " << ideal_label(l, l.masks[k]) << " = {" << es << "}\n";
  }
  return o.str();
}

// ---------------------------------------------------------------------------
// kgroups

inline std::string kgroups_output(const FamilyPtr& f, Format fmt) {
  require_not_dot(fmt, "kgroups");
  if (!f->group()->is_finite()) {
    Presentation p = presentation_matrix(f->action());
    Json j;
    j["presentation"] = p.element;
    if (!p.relations.empty()) j["relations"] = p.relations;
    if (fmt == Format::Json) return render(j);
    std::ostringstream o;
    o << "K-groups are not extracted for infinite Γ.\n";
    o << "K0 = coker, K1 = ker of multiplication by " << p.element << " on " << p.ring << "\n";
    for (const auto& r : p.relations) o << "  " << r << "\n";
    return o.str();
  }
  KGroupReport r = kgroups_finite(*f);
  Json factors = Json::array();
  for (const auto& d : r.k0_invariant_factors) factors.push_back(json_integer(d));
  Json j;
  j["K0"] = Json{{"factors", factors}, {"free_rank", r.k0_free_rank}};
  j["K1"] = Json{{"free_rank", r.k1_free_rank}};
  if (fmt == Format::Json) return render(j);
  auto group = [](const std::vector<Integer>& fs, std::size_t free) {
    std::string out;
    if (free) out = free == 1 ? "Z" : "Z^" + std::to_string(free);
    for (const auto& d : fs) out += (out.empty() ? "Z/" : " x Z/") + d.str();
    return out.empty() ? std::string("0") : out;
  };
  std::ostringstream o;
  o << "K0 = " << group(r.k0_invariant_factors, r.k0_free_rank) << "\n";
  o << "K1 = " << group({}, r.k1_free_rank) << "\n";
  o << "(from M = I - Σ P_ω of size " << r.matrix_size << ")\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// set

inline std::string set_output(const FamilyPtr& f, const QueryConfig& q, Format fmt) {
  require_not_dot(fmt, "set");
  if (!q.expr) throw ParseError("no set expression: give --expr or expr = ... in [query]");
  SetEvaluator ev(f);
  SetValue v = ev.eval(*q.expr);
  const bool explicit_preds = !q.predicates.empty();
  std::vector<std::string> preds = q.predicates;
  for (const auto& p : preds)
    if (p != "invariant" && p != "prime" && p != "bad")
      throw ParseError("unknown predicate '" + p + "' (invariant, prime, bad)");
  auto wants = [&](const std::string& p) {
    return !explicit_preds || std::find(preds.begin(), preds.end(), p) != preds.end();
  };

  Json j;
  if (auto* x = std::get_if<FinitarySet>(&v)) {
    FinitarySet s = x->simplified();
    j["kind"] = "gamma";
    j["set"] = s.to_string();
    if (f->group()->is_finite()) {
      Json elems = Json::array();
      for (const auto& g : s.to_finite().elements()) elems.push_back(g.to_string());
      j["elements"] = elems;
    }
    auto violation = s.invariance_violation();
    if (wants("invariant")) {
      j["invariant"] = !violation;
      if (violation) j["invariance_witness"] = violation->to_string();
    }
    const bool usable = !violation && !s.is_empty();
    if (wants("prime") && (explicit_preds || usable)) {
      PrimeResult pr = is_prime(s);
      j["prime"] = pr.prime;
      if (pr.witness) j["prime_witness"] = pr.witness->to_string();
    }
    if (wants("bad") && (explicit_preds || !violation)) {
      BadResult br = is_bad(s, ev.report());
      j["bad"] = br.bad;
      if (br.witness) j["bad_witness"] = br.witness->to_string();
    }
    Json members = Json::array();
    for (const auto& m : q.members) {
      GroupElem g = ev.element(m);
      members.push_back(Json{{"element", g.to_string()}, {"member", s.contains(g)}});
    }
    if (!q.members.empty()) j["members"] = members;
  } else {
    ExtSet y = std::get<ExtSet>(v).canonical();
    if (explicit_preds)
      for (const auto& p : preds)
        if (p != "invariant") throw ParseError("predicate '" + p + "' applies to subsets of Gamma only");
    j["kind"] = "extended";
    j["set"] = y.to_string();
    auto violation = invariance_violation_ext(y);
    j["invariant"] = !violation;
    if (violation) j["invariance_witness"] = y.context()->lift(*violation).to_string();
    // Members of Gamma' x T are written g@p/q with g in Gamma.
    Json members = Json::array();
    for (const auto& m : q.members) {
      auto s = detail::trim(m);
      auto at = s.find('@');
      if (at == std::string_view::npos)
        throw ParseError("member of Gamma' x T must be g@p/q, got '" + std::string(s) + "'");
      std::string_view parts[2] = {s.substr(0, at), s.substr(at + 1)};
      GroupElem g = ev.element(parts[0]);
      Angle t = parse_angle(parts[1]);
      members.push_back(Json{{"element", g.to_string()},
                             {"angle", t.to_string()},
                             {"member", y.contains(y.context()->project(g), t)}});
    }
    if (!q.members.empty()) j["members"] = members;
  }
  if (fmt == Format::Json) return render(j);
  std::ostringstream o;
  for (const auto& [k, val] : j.items()) {
    if (k == "members") {
      for (const auto& m : val) {
        o << "member " << m["element"].get<std::string>();
        if (m.contains("angle")) o << " @ " << m["angle"].get<std::string>();
        o << ": " << (m["member"].get<bool>() ? "yes" : "no") << "\n";
      }
    } else if (val.is_boolean()) {
      o << k << ": " << (val.get<bool>() ? "yes" : "no") << "\n";
    } else if (val.is_string()) {
      o << k << ": " << val.get<std::string>() << "\n";
    } else {
      o << k << ": " << val.dump() << "\n";
    }
  }
  return o.str();
}

// ---------------------------------------------------------------------------
// compact

inline std::string compact_output(const CompactConfig& c, Format fmt) {
  require_not_dot(fmt, "compact");
  CompactDualReport r = analyze_compact_dual(c.torus_rank, c.weights);
  Json inv = Json::array(), prim = Json::array();
  for (const auto& d : r.invariant_factors) inv.push_back(json_integer(d));
  for (const auto& d : r.primary_factors) prim.push_back(json_integer(d));
  Json j;
  j["torus_rank"] = r.torus_rank;
  j["omega_closure"] = r.group_string();
  j["invariant_factors"] = inv;
  j["primary_factors"] = prim;
  j["order"] = json_integer(r.order);
  j["prim"] = r.prim_string();
  j["statement"] = r.statement();
  if (fmt == Format::Json) return render(j);
  std::ostringstream o;
  o << "closed subgroup generated by the weights: " << r.group_string() << " (order " << r.order.str() << ")\n";
  o << "Γ/Ω̄ = " << r.prim_string() << "\n";
  o << r.statement() << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// selfcheck: randomized cross-checks of independent routes.

struct SelfCheckResult {
  std::size_t checks = 0;
  std::vector<std::string> failures;
};

inline SelfCheckResult run_selfcheck(std::uint64_t seed, std::size_t rounds, const Limits& limits) {
  std::mt19937_64 rng(seed);
  SelfCheckResult r;
  auto fail = [&](const std::string& what, const ActionSpec& a) { r.failures.push_back(what + " for " + a.to_string()); };
  std::vector<GroupPtr> finite{make_group(0, {6}), make_group(0, {2, 4}), make_group(0, {3, 3}), make_group(0, {12})};
  std::vector<GroupPtr> infinite{make_group(1), make_group(2), make_group(1, {2})};
  for (std::size_t round = 0; round < rounds; ++round) {
    auto pick = [&](const std::vector<GroupPtr>& gs) { return gs[rng() % gs.size()]; };
    std::uniform_int_distribution<long long> coord(-5, 5);
    auto random_family = [&](const GroupPtr& g) {
      std::vector<GroupElem> omega;
      const std::size_t n = 2 + rng() % 3;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Integer> c(g->dimension());
        for (auto& x : c) x = coord(rng);
        omega.emplace_back(g, std::move(c));
      }
      return make_family(make_action(g, std::move(omega), limits), limits);
    };

    auto f = random_family(pick(finite));
    const auto& a = f->action();
    auto lat = ideal_lattice_finite(*f);
    auto brute = brute_force_invariant_sets(*f);
    ++r.checks;
    if (lat.count != brute.size()) fail("ideal count", a);
    ++r.checks;
    if (is_simple(*f) != (brute.size() == 2)) fail("simplicity", a);
    ++r.checks;
    if (!condition_check(*f).holds) fail("condition on finite group", a);
    auto sparse = kgroups_finite(*f), dense = kgroups_dense(*f);
    ++r.checks;
    if (sparse.k0_invariant_factors != dense.k0_invariant_factors || sparse.k0_free_rank != dense.k0_free_rank)
      fail("K-theory routes", a);
    auto e = enumerate_group(*f);
    for (std::uint32_t bits = 0; bits < (1u << f->n()); ++bits) {
      const auto& s = f->semigroup(IndexSet::from_bits(bits));
      for (std::size_t k = 0; k < e->order(); ++k) {
        ++r.checks;
        if (s.contains(e->element_at(k)) != s.contains_symbolic(e->element_at(k))) fail("finite membership routes", a);
      }
    }

    auto fi = random_family(pick(infinite));
    auto spec = strong_connes_spectrum(fi);
    for (int k = 0; k < 20; ++k) {
      std::vector<Integer> c1(fi->group()->dimension()), c2(fi->group()->dimension());
      for (auto& x : c1) x = coord(rng);
      for (auto& x : c2) x = coord(rng);
      GroupElem g1(fi->group(), c1), g2(fi->group(), c2);
      ++r.checks;
      if (spec.contains(g1) && spec.contains(g2) && !spec.contains(g1 + g2)) fail("spectrum closure", fi->action());
      const auto& omega = fi->semigroup({});
      ++r.checks;
      if (omega.contains(g1) && omega.contains(g2) && !omega.contains(g1 + g2)) fail("semigroup closure", fi->action());
    }
  }
  return r;
}

inline std::string selfcheck_output(std::uint64_t seed, const SelfCheckResult& r, Format fmt) {
  require_not_dot(fmt, "selfcheck");
  Json j;
  j["seed"] = seed;
  j["checks"] = r.checks;
  j["failures"] = r.failures;
  if (fmt == Format::Json) return render(j);
  std::ostringstream o;
  o << "seed " << seed << ": " << r.checks << " checks, " << r.failures.size() << " failures\n";
  for (const auto& s : r.failures) o << "  " << s << "\n";
  return o.str();
}

}  // namespace cuntz
