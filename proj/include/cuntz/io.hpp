#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cuntz/classify.hpp"
#include "cuntz/errors.hpp"
#include "cuntz/extended_sets.hpp"
#include "cuntz/invariant_sets.hpp"
#include "cuntz/limits.hpp"
#include "cuntz/semigroup.hpp"

namespace cuntz {

// ---------------------------------------------------------------------------
// INI-style files: [section] headers, key = value lines, '#' or ';' comments.
// A value may continue on following lines while brackets are unbalanced.

struct IniFile {
  // section -> ordered (key, value, line)
  std::map<std::string, std::vector<std::tuple<std::string, std::string, std::size_t>>> sections;
};

namespace detail {

inline int bracket_balance(std::string_view s) {
  int depth = 0;
  bool quoted = false;
  for (char c : s) {
    if (c == '"') quoted = !quoted;
    if (quoted) continue;
    if (c == '[' || c == '(' || c == '{') ++depth;
    if (c == ']' || c == ')' || c == '}') --depth;
  }
  return depth;
}

inline std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (!quoted && (line[i] == '#' || line[i] == ';')) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

}  // namespace detail

inline IniFile parse_ini(std::string_view text, const std::map<std::string, std::vector<std::string>>& schema) {
  IniFile ini;
  std::istringstream in{std::string(text)};
  std::string raw, section;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) { throw ParseError("line " + std::to_string(lineno) + ": " + msg); };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line(detail::trim(detail::strip_comment(raw)));
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) {
      section = std::string(detail::trim(std::string_view(line).substr(1, line.size() - 2)));
      if (!schema.count(section)) fail("unknown section [" + section + "]");
      if (ini.sections.count(section)) fail("duplicate section [" + section + "]");
      ini.sections[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value, got '" + line + "'");
    if (section.empty()) fail("key outside of any section");
    std::string key(detail::trim(std::string_view(line).substr(0, eq)));
    std::string value(detail::trim(std::string_view(line).substr(eq + 1)));
    const std::size_t start = lineno;
    while (detail::bracket_balance(value) > 0 && std::getline(in, raw)) {
      ++lineno;
      value += " " + std::string(detail::trim(detail::strip_comment(raw)));
    }
    if (detail::bracket_balance(value) != 0) fail("unbalanced brackets in value of '" + key + "'");
    const auto& allowed = schema.at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      fail("unknown key '" + key + "' in [" + section + "]");
    for (const auto& [k, v, l] : ini.sections[section])
      if (k == key) fail("duplicate key '" + key + "' in [" + section + "]");
    ini.sections[section].emplace_back(key, value, start);
  }
  return ini;
}

inline std::optional<std::string> ini_get(const IniFile& ini, const std::string& section, const std::string& key) {
  auto it = ini.sections.find(section);
  if (it == ini.sections.end()) return std::nullopt;
  for (const auto& [k, v, l] : it->second)
    if (k == key) return v;
  return std::nullopt;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---------------------------------------------------------------------------
// Input file.

struct QueryConfig {
  std::optional<std::string> expr;
  std::vector<std::string> members;
  std::vector<std::string> predicates;
};

struct CompactConfig {
  std::size_t torus_rank = 0;
  std::vector<std::vector<Rational>> weights;
};

struct InputConfig {
  std::optional<GroupPtr> group;
  std::vector<std::vector<Integer>> omega;
  QueryConfig query;
  std::optional<CompactConfig> compact;

  bool has_action() const { return group.has_value(); }
};

namespace detail {

inline std::vector<std::string> split_list(std::string_view value) {
  value = trim(value);
  if (value.size() >= 2 && value.front() == '[' && value.back() == ']') value = trim(value.substr(1, value.size() - 2));
  std::vector<std::string> out;
  if (value.empty()) return out;
  for (auto part : split_top_level(value, ',')) {
    auto p = trim(part);
    if (p.empty()) throw ParseError("empty entry in list '" + std::string(value) + "'");
    out.emplace_back(p);
  }
  return out;
}

inline std::size_t parse_count(std::string_view s, const std::string& what) {
  Integer v = parse_integer(s);
  if (v < 0 || v > 1'000'000) throw ParseError(what + " out of range: " + v.str());
  return v.convert_to<std::size_t>();
}

}  // namespace detail

inline InputConfig parse_input(std::string_view text) {
  static const std::map<std::string, std::vector<std::string>> schema{
      {"group", {"rank", "torsion"}},
      {"action", {"n", "omega"}},
      {"query", {"expr", "member", "predicates"}},
      {"compact", {"d", "weights"}},
  };
  IniFile ini = parse_ini(text, schema);
  InputConfig cfg;
  const bool has_group = ini.sections.count("group") > 0, has_action = ini.sections.count("action") > 0;
  if (has_group != has_action) throw ParseError("[group] and [action] must appear together");
  if (has_group) {
    GroupSpec spec;
    if (auto r = ini_get(ini, "group", "rank")) spec = parse_group_spec("rank=" + *r);
    if (auto t = ini_get(ini, "group", "torsion")) spec.torsion = parse_group_spec("torsion=" + *t).torsion;
    cfg.group = make_group(spec.rank, spec.torsion);
    auto om = ini_get(ini, "action", "omega");
    if (!om) throw ParseError("[action] needs omega = [[...], ...]");
    for (const auto& w : detail::split_list(*om)) cfg.omega.push_back(detail::parse_integer_list(w, '[', ']'));
    if (auto n = ini_get(ini, "action", "n"); n && detail::parse_count(*n, "n") != cfg.omega.size())
      throw ParseError("n = " + *n + " but omega lists " + std::to_string(cfg.omega.size()) + " weights");
    for (const auto& w : cfg.omega)
      if (w.size() != (*cfg.group)->dimension())
        throw ParseError("weight with " + std::to_string(w.size()) + " coordinates in a group of dimension " +
                         std::to_string((*cfg.group)->dimension()));
  }
  if (ini.sections.count("query")) {
    if (!has_group) throw ParseError("[query] needs [group] and [action]");
    cfg.query.expr = ini_get(ini, "query", "expr");
    if (auto m = ini_get(ini, "query", "member")) cfg.query.members = detail::split_list(*m);
    if (auto p = ini_get(ini, "query", "predicates")) cfg.query.predicates = detail::split_list(*p);
  }
  if (ini.sections.count("compact")) {
    CompactConfig c;
    auto d = ini_get(ini, "compact", "d");
    if (!d) throw ParseError("[compact] needs d");
    c.torus_rank = detail::parse_count(*d, "d");
    if (auto w = ini_get(ini, "compact", "weights"))
      for (const auto& vec : detail::split_list(*w)) {
        std::vector<Rational> row;
        for (const auto& x : detail::split_list(vec)) row.push_back(parse_rational(x));
        c.weights.push_back(std::move(row));
      }
    cfg.compact = std::move(c);
  }
  return cfg;
}

inline FamilyPtr build_family(const InputConfig& cfg, const Limits& limits) {
  if (!cfg.group) throw ParseError("input has no [group]/[action] sections");
  std::vector<GroupElem> omega;
  for (const auto& w : cfg.omega) omega.emplace_back(*cfg.group, w);
  return make_family(make_action(*cfg.group, std::move(omega), limits), limits);
}

/// key = value lines, optionally under [limits]; keys are the Limits fields.
inline Limits parse_limits(std::string_view text) {
  static const std::vector<std::string> keys{"max_rank",          "max_weights",      "max_coordinate",
                                             "max_exponent",      "max_search_states", "max_finite_order",
                                             "max_brute_force_order", "max_dot_nodes"};
  std::string body = text.find("[limits]") != std::string_view::npos ? std::string(text)
                                                                     : "[limits]\n" + std::string(text);
  IniFile ini = parse_ini(body, {{"limits", keys}});
  Limits l;
  for (const auto& [k, v, line] : ini.sections["limits"]) {
    Integer x = parse_integer(v);
    if (x < 0 || x > Integer(1) << 40) throw ParseError("limit " + k + " out of range: " + x.str());
    auto u = x.convert_to<std::size_t>();
    if (k == "max_rank") l.max_rank = u;
    else if (k == "max_weights") l.max_weights = u;
    else if (k == "max_coordinate") l.max_coordinate = static_cast<long long>(u);
    else if (k == "max_exponent") l.max_exponent = static_cast<long long>(u);
    else if (k == "max_search_states") l.max_search_states = u;
    else if (k == "max_finite_order") l.max_finite_order = u;
    else if (k == "max_brute_force_order") l.max_brute_force_order = u;
    else l.max_dot_nodes = u;
  }
  return l;
}

// ---------------------------------------------------------------------------
// Set expressions.
//
//   empty | empty() | atom(g, {i,..}) | union(e, ..) | translate(e, g)
//   ypoint(g, "p/q") | fiber(g, "p/q") | full(e) | lift(e) | rotate(y, "p/q")
//   project(y) | restrict(y) | badext(e)
//
// g is a Gamma element ("5" or "(1, 0)"); index sets are 1-based. The
// extended forms need the condition to fail and use the class of g in Gamma'.

using SetValue = std::variant<FinitarySet, ExtSet>;

class SetEvaluator {
 public:
  explicit SetEvaluator(FamilyPtr family) : family_(std::move(family)), report_(condition_check(*family_)) {}

  const ConditionReport& report() const { return report_; }
  const FamilyPtr& family() const { return family_; }

  const NormalizedPtr& context() {
    if (!ctx_) {
      if (report_.holds)
        throw PreconditionError("extended sets need an index failing the condition; here it holds for every index");
      ctx_ = normalize_failing(family_, report_);
    }
    return ctx_;
  }

  SetValue eval(std::string_view text) {
    auto s = detail::trim(text);
    if (++depth_ > 64) throw ParseError("set expression nested too deeply");
    struct Guard {
      int& d;
      ~Guard() { --d; }
    } guard{depth_};
    if (s == "empty" || s == "empty()") return FinitarySet(family_);
    auto open = s.find('(');
    if (open == std::string_view::npos || s.back() != ')') throw ParseError("cannot parse set expression '" + std::string(s) + "'");
    std::string name(detail::trim(s.substr(0, open)));
    auto body = s.substr(open + 1, s.size() - open - 2);
    if (detail::bracket_balance(body) != 0) throw ParseError("unbalanced parentheses in '" + std::string(s) + "'");
    std::vector<std::string_view> args;
    if (!detail::trim(body).empty())
      for (auto a : detail::split_top_level(body, ',')) args.push_back(detail::trim(a));
    auto arity = [&](std::size_t k) {
      if (args.size() != k)
        throw ParseError(name + " takes " + std::to_string(k) + " argument(s), got " + std::to_string(args.size()));
    };

    if (name == "atom") {
      arity(2);
      IndexSet I = parse_index_set(args[1]);
      if (I.bound() > family_->n()) throw ParseError("index set " + I.to_string() + " out of range for n = " + std::to_string(family_->n()));
      return FinitarySet::atom(family_, element(args[0]), I);
    }
    if (name == "union") {
      if (args.empty()) return FinitarySet(family_);
      SetValue acc = eval(args[0]);
      for (std::size_t k = 1; k < args.size(); ++k) {
        SetValue next = eval(args[k]);
        if (acc.index() != next.index())
          throw ParseError("union mixes a subset of Gamma with a subset of Gamma' x T");
        if (auto* a = std::get_if<FinitarySet>(&acc)) acc = a->united(std::get<FinitarySet>(next));
        else acc = std::get<ExtSet>(acc).united(std::get<ExtSet>(next));
      }
      return acc;
    }
    if (name == "translate") {
      arity(2);
      return gamma_set(args[0], name).translated(element(args[1]));
    }
    if (name == "ypoint" || name == "fiber") {
      arity(2);
      GroupElem g = element(args[0]);
      Angle theta = parse_angle(args[1]);
      const auto& ctx = context();
      if (name == "ypoint") return make_Y_point(ctx, ctx->project(g), theta);
      ExtSet::PointMap p;
      p[ctx->project(g)].insert(theta);
      return ExtSet(ctx, std::move(p), FinitarySet(family_));
    }
    if (name == "full") {
      arity(1);
      return ExtSet(context(), {}, gamma_set(args[0], name));
    }
    if (name == "lift") {
      arity(1);
      return lift_X(context(), gamma_set(args[0], name));
    }
    if (name == "badext") {
      arity(1);
      return bad_extension(context(), gamma_set(args[0], name));
    }
    if (name == "rotate") {
      arity(2);
      return rotate(ext_set(args[0], name), parse_angle(args[1]));
    }
    if (name == "project") {
      arity(1);
      return project_to_gamma(ext_set(args[0], name));
    }
    if (name == "restrict") {
      arity(1);
      return restrict_to_gamma_margin(ext_set(args[0], name));
    }
    throw ParseError("unknown set operation '" + name + "'");
  }

  GroupElem element(std::string_view text) const { return parse_element(family_->group(), text); }

 private:
  FinitarySet gamma_set(std::string_view arg, const std::string& op) {
    SetValue v = eval(arg);
    if (auto* x = std::get_if<FinitarySet>(&v)) return *x;
    throw ParseError(op + " expects a subset of Gamma");
  }
  ExtSet ext_set(std::string_view arg, const std::string& op) {
    SetValue v = eval(arg);
    if (auto* y = std::get_if<ExtSet>(&v)) return *y;
    throw ParseError(op + " expects a subset of Gamma' x T");
  }

  FamilyPtr family_;
  ConditionReport report_;
  NormalizedPtr ctx_;
  int depth_ = 0;
};

}  // namespace cuntz
