// cuntz: ideal structure and K-theory of quasi-free crossed products of
// Cuntz algebras, from an action description file.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cuntz/io.hpp"
#include "cuntz/report.hpp"

namespace {

enum Exit { kOk = 0, kOther = 1, kParse = 2, kResource = 3, kUnsupported = 4, kPrecondition = 5 };

struct Options {
  std::string format = "text";
  std::string limits_path;
  std::uint64_t seed = 1;
  std::string input;
  std::optional<std::string> expr;
  std::vector<std::string> members;
  std::vector<std::string> predicates;
};

int report_error(const Options& opt, int code, const std::string& kind, const std::string& msg,
                 const std::string& witness = {}) {
  std::cerr << "error (" << kind << "): " << msg << "\n";
  if (!witness.empty()) std::cerr << "witness: " << witness << "\n";
  if (opt.format == "json") {
    cuntz::Json j{{"error", kind}, {"message", msg}};
    if (!witness.empty()) j["witness"] = witness;
    std::cout << cuntz::render(j);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ideals, primitive ideal space and K-theory of O_n crossed by a quasi-free action"};
  app.require_subcommand(1, 1);
  Options opt;
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json", "dot"}));
  app.add_option("--limits", opt.limits_path, "Limits override file (key = value lines)");
  app.add_option("--seed", opt.seed, "Seed for randomized commands (selfcheck)");

  auto* analyze = app.add_subcommand("analyze", "Simplicity, primitivity, condition, spectrum and Prim");
  auto* ideals = app.add_subcommand("ideals", "Ideal lattice for finite Γ (text/json listing or DOT Hasse diagram)");
  auto* kgroups = app.add_subcommand("kgroups", "K0 and K1 for finite Γ, or the presentation for infinite Γ");
  auto* set = app.add_subcommand("set", "Evaluate a set expression and its predicates");
  auto* compact = app.add_subcommand("compact", "Structural report for the [compact] section");
  auto* selfcheck = app.add_subcommand("selfcheck", "Randomized cross-checks between independent routes");
  for (auto* sc : {analyze, ideals, kgroups, set, compact})
    sc->add_option("input", opt.input, "Input file with [group]/[action] sections")->required();
  set->add_option("--expr", opt.expr, "Set expression (overrides [query] expr)");
  set->add_option("--member", opt.members, "Element to test for membership (repeatable)");
  set->add_option("--predicates", opt.predicates, "Predicates: invariant, prime, bad")->delimiter(',');
  // Options may be given before or after the subcommand.
  for (auto* sc : {analyze, ideals, kgroups, set, compact, selfcheck}) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    cuntz::Format fmt = cuntz::parse_format(opt.format);
    cuntz::Limits limits;
    if (!opt.limits_path.empty()) limits = cuntz::parse_limits(cuntz::read_file(opt.limits_path));

    if (selfcheck->parsed()) {
      auto result = cuntz::run_selfcheck(opt.seed, 20, limits);
      std::cout << cuntz::selfcheck_output(opt.seed, result, fmt);
      return result.failures.empty() ? kOk : kOther;
    }
    cuntz::InputConfig cfg = cuntz::parse_input(cuntz::read_file(opt.input));
    if (compact->parsed()) {
      if (!cfg.compact) throw cuntz::ParseError("input has no [compact] section");
      std::cout << cuntz::compact_output(*cfg.compact, fmt);
      return kOk;
    }
    auto family = cuntz::build_family(cfg, limits);
    if (analyze->parsed()) {
      cuntz::require_not_dot(fmt, "analyze");
      std::cout << (fmt == cuntz::Format::Json ? cuntz::render(cuntz::analyze_json(family)) : cuntz::analyze_text(family));
    } else if (ideals->parsed()) {
      std::cout << cuntz::ideals_output(family, fmt);
    } else if (kgroups->parsed()) {
      std::cout << cuntz::kgroups_output(family, fmt);
    } else if (set->parsed()) {
      cuntz::QueryConfig q = cfg.query;
      // A command-line expression replaces the whole [query] block.
      if (opt.expr) q = cuntz::QueryConfig{opt.expr, {}, {}};
      if (!opt.members.empty()) q.members = opt.members;
      if (!opt.predicates.empty()) q.predicates = opt.predicates;
      std::cout << cuntz::set_output(family, q, fmt);
    }
    return kOk;
  } catch (const cuntz::ParseError& e) {
    return report_error(opt, kParse, "parse", e.what());
  } catch (const cuntz::DomainError& e) {
    return report_error(opt, kParse, "domain", e.what());
  } catch (const cuntz::ResourceLimitError& e) {
    return report_error(opt, kResource, "resource", e.what());
  } catch (const cuntz::UnsupportedError& e) {
    return report_error(opt, kUnsupported, "unsupported", e.what());
  } catch (const cuntz::PreconditionError& e) {
    return report_error(opt, kPrecondition, "precondition", e.what(), e.witness());
  } catch (const std::exception& e) {
    return report_error(opt, kOther, "internal", e.what());
  }
}
