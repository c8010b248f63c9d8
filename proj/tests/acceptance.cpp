// Acceptance run: one PASS/FAIL line per criterion, with time limits pinned
// below. Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cuntz/classify.hpp"
#include "cuntz/extended_sets.hpp"
#include "cuntz/invariant_sets.hpp"
#include "cuntz/ktheory.hpp"
#include "cuntz/normal_form.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace cuntz;
using namespace testing_support;

namespace {

// Time limits in seconds.
constexpr double kLimitCorpus = 60.0;
constexpr double kLimitKTheoryEach = 1.0;
constexpr double kLimitSnf = 10.0;
constexpr double kLimitMembership = 120.0;
constexpr double kLimitExtended = 10.0;
constexpr std::size_t kMinPointChecks = 10000;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

// 100 actions per group, n alternating in {2, 3}, weights uniform in the group.
struct CorpusEntry {
  FamilyPtr family;
  std::vector<FiniteSet> invariant_sets;
};

std::vector<CorpusEntry> build_corpus() {
  std::vector<GroupPtr> groups;
  for (long long k = 2; k <= 12; ++k) groups.push_back(make_group(0, {k}));
  groups.push_back(make_group(0, {2, 2}));
  groups.push_back(make_group(0, {2, 4}));
  std::mt19937_64 rng(20240611);
  std::vector<CorpusEntry> out;
  for (const auto& g : groups)
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<GroupElem> omega;
      for (int i = 0; i < 2 + trial % 2; ++i) {
        std::vector<Integer> c;
        for (const auto& t : g->torsion) c.push_back(Integer(rng() % t.convert_to<unsigned long long>()));
        omega.emplace_back(g, std::move(c));
      }
      out.push_back({make_family(make_action(g, std::move(omega))), {}});
    }
  return out;
}

std::vector<CorpusEntry>& corpus() {
  static std::vector<CorpusEntry> c = build_corpus();
  return c;
}

const std::vector<FiniteSet>& invariant_sets(CorpusEntry& e) {
  if (e.invariant_sets.empty()) e.invariant_sets = brute_force_invariant_sets(*e.family);
  return e.invariant_sets;
}

Outcome criterion1() {
  Outcome o;
  auto t0 = Clock::now();
  for (auto& e : corpus()) {
    Integer expected = ideal_lattice_finite(*e.family).count;
    if (Integer(invariant_sets(e).size()) != expected)
      o.fail(e.family->action().to_string() + ": " + std::to_string(invariant_sets(e).size()) + " sets, expected " +
             expected.str());
  }
  double t = seconds_since(t0);
  if (t >= kLimitCorpus) o.fail("took " + std::to_string(t) + " s");
  if (o.pass) o.detail = std::to_string(corpus().size()) + " actions, " + std::to_string(t) + " s";
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::size_t simple = 0;
  for (auto& e : corpus()) {
    bool s = is_simple(*e.family);
    simple += s;
    if (s != (invariant_sets(e).size() == 2)) o.fail("mismatch for " + e.family->action().to_string());
  }
  if (o.pass) o.detail = std::to_string(simple) + " simple of " + std::to_string(corpus().size()) + ", 0 mismatches";
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (auto& e : corpus()) {
    const auto& f = *e.family;
    auto sp = strong_connes_spectrum(e.family);
    if (!sp.explicit_set) {
      o.fail("no explicit set for " + f.action().to_string());
      continue;
    }
    auto en = enumerate_group(f);
    std::vector<GroupElem> keep;
    for (std::size_t k = 0; k < en->order(); ++k) {
      GroupElem g = en->element_at(k);
      bool ok = true;
      for (const auto& x : invariant_sets(e)) ok = ok && x.translated(g).subset_of(x);
      if (ok) keep.push_back(g);
    }
    if (!(FiniteSet::of(en, keep) == *sp.explicit_set))
      o.fail(f.action().to_string() + ": " + sp.explicit_set->to_string() + " vs " + FiniteSet::of(en, keep).to_string());
  }
  if (o.pass) o.detail = "exact on " + std::to_string(corpus().size()) + " actions";
  return o;
}

Outcome criterion4() {
  Outcome o;
  auto check = [&](const std::string& name, const FamilyPtr& f, std::vector<Integer> factors, std::size_t k0_free,
                   std::size_t k1_free) {
    auto t0 = Clock::now();
    auto r = kgroups_finite(*f);
    double t = seconds_since(t0);
    if (r.k0_invariant_factors != factors || r.k0_free_rank != k0_free || r.k1_free_rank != k1_free)
      o.fail(name + " gave the wrong groups");
    if (t >= kLimitKTheoryEach) o.fail(name + " took " + std::to_string(t) + " s");
    // Independent route: dense Smith form of the full matrix.
    auto d = kgroups_dense(*f);
    if (d.k0_invariant_factors != factors || d.k0_free_rank != k0_free) o.fail(name + ": dense route disagrees");
  };
  auto triv = make_group(0);
  for (std::size_t n = 2; n <= 9; ++n) {
    std::vector<Integer> f;
    if (n > 2) f.push_back(Integer(n - 1));
    check("trivial n=" + std::to_string(n), family(triv, std::vector<std::vector<long long>>(n)), f, 0, 0);
  }
  check("Z/3 (1,1)", family(make_group(0, {3}), {{1}, {1}}), {7}, 0, 0);
  check("Z/2 (0,0,1)", family(make_group(0, {2}), {{0}, {0}, {1}}), {}, 1, 1);
  if (o.pass) o.detail = "10 anchors exact";
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(5);
  auto t0 = Clock::now();
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t r = 1 + rng() % 8, c = 1 + rng() % 8;
    IntMatrix m = oracle::random_matrix(rng, r, c, -9, 9);
    if (trial % 7 == 0 && r > 1)  // force rank deficiency now and then
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = 2 * m(0, j);
    auto s = smith_normal_form(m);
    if (!(s.U * m * s.V == s.D)) o.fail("U*M*V != D");
    if (abs(oracle::determinant(s.U)) != 1 || abs(oracle::determinant(s.V)) != 1) o.fail("U or V not unimodular");
    if (!(s.V * s.V_inverse == IntMatrix::identity(c))) o.fail("V_inverse wrong");
    auto d = s.diagonal();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j && s.D(i, j) != 0) o.fail("D not diagonal");
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (d[k] < 0) o.fail("negative diagonal entry");
      if (k + 1 < d.size() && (d[k] == 0 ? d[k + 1] != 0 : d[k + 1] % d[k] != 0)) o.fail("divisibility chain broken");
    }
    if (s.rank != oracle::rational_rank(m)) o.fail("rank disagrees with the rational oracle");
  }
  double t = seconds_since(t0);
  if (t >= kLimitSnf) o.fail("took " + std::to_string(t) + " s");
  if (o.pass) o.detail = "1000 matrices, " + std::to_string(t) + " s";
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> coord(-5, 5);
  const long long inner = 20, outer = 40;
  std::size_t checks = 0;
  auto t0 = Clock::now();
  for (auto g : {make_group(1), make_group(2), make_group(1, {2})}) {
    const std::size_t fr = g->rank;
    std::vector<long long> torsion;
    for (const auto& t : g->torsion) torsion.push_back(t.convert_to<long long>());
    for (int trial = 0; trial < 8; ++trial) {
      const std::size_t n = 2 + trial % 3;
      std::vector<GroupElem> omega;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Integer> w(g->dimension());
        for (auto& x : w) x = coord(rng);
        omega.emplace_back(g, std::move(w));
      }
      auto a = make_action(g, omega);
      IndexSet I = IndexSet::from_bits(static_cast<std::uint32_t>(rng() % (1u << n)));
      auto s = make_semigroup(a, I);
      std::vector<std::vector<long long>> gens;
      for (const auto& h : s.generators()) {
        std::vector<long long> v;
        for (const auto& c : h.coords()) v.push_back(c.convert_to<long long>());
        gens.push_back(std::move(v));
      }
      auto closure = oracle::box_closure(gens, fr, torsion, outer);
      for (const auto& x : box(g, inner)) {
        std::vector<long long> key;
        for (const auto& c : x.coords()) key.push_back(c.convert_to<long long>());
        ++checks;
        if (member(s, x) != (closure.count(key) > 0))
          o.fail(a->to_string() + " I=" + I.to_string() + " at " + x.to_string());
      }
    }
  }
  double t = seconds_since(t0);
  if (checks < kMinPointChecks) o.fail("only " + std::to_string(checks) + " point checks");
  if (t >= kLimitMembership) o.fail("took " + std::to_string(t) + " s");
  if (o.pass) o.detail = std::to_string(checks) + " point checks, " + std::to_string(t) + " s";
  return o;
}

Outcome criterion7() {
  Outcome o;
  auto c1 = condition_check(*family(make_group(1), {{0}, {1}}));
  if (c1.holds || c1.failing_index != 0u || c1.K != 1) o.fail("(Z, (0,1)) should fail at 1 with K=1");
  auto c2 = condition_check(*family(make_group(1, {2}), {{0, 1}, {1, 0}}));
  if (c2.holds || c2.failing_index != 0u || c2.K != 2) o.fail("(Z x Z/2, ((0,1),(1,0))) should fail at 1 with K=2");
  for (auto& e : corpus())
    if (!condition_check(*e.family).holds) o.fail("fails on finite " + e.family->action().to_string());
  if (o.pass) o.detail = "2 fixtures exact, " + std::to_string(corpus().size()) + " finite actions hold";
  return o;
}

Outcome criterion8() {
  Outcome o;
  auto p1 = primitive_ideal_space(*family(make_group(1), {{0}, {1}}));
  if (p1.components.size() != 2 || p1.components[0].rep.to_string() != "{1}" ||
      p1.components[0].description() != "Z x T" || p1.components[1].rep.to_string() != "{2}" ||
      p1.components[1].description() != "point")
    o.fail("(Z, (0,1)) components wrong");
  auto p2 = primitive_ideal_space(*family(make_group(1), {{1}, {1}}));
  if (p2.components.size() != 1 || p2.components[0].description() != "point") o.fail("(Z, (1,1)) should be one point");
  if (o.pass) o.detail = "[Z x T, point] and [point]";
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::mt19937_64 rng(9);
  auto t0 = Clock::now();
  std::vector<FamilyPtr> fixtures{family(make_group(1), {{0}, {1}}), family(make_group(1, {2}), {{0, 1}, {1, 0}})};
  auto random_angle = [&] { return Angle(static_cast<long long>(rng() % 12), 12); };
  std::size_t built = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto f = fixtures[trial % 2];
    auto ctx = normalize_failing(f);
    const auto& gp = ctx->gamma_prime_group();
    auto random_x = [&] {
      std::vector<Atom> atoms;
      for (std::size_t k = 0, m = 1 + rng() % 3; k < m; ++k)
        atoms.push_back(Atom{random_elem(rng, f->group(), 6), IndexSet::from_bits(static_cast<std::uint32_t>(rng() % 4))});
      return FinitarySet(f, std::move(atoms));
    };
    ExtSet y = ExtSet::empty(ctx);
    for (std::size_t k = 0, m = 1 + rng() % 4; k < m; ++k) {
      switch (rng() % 3) {
        case 0:
          y = y.united(make_Y_point(ctx, random_elem(rng, gp, 6), random_angle()));
          break;
        case 1:
          y = y.united(lift_X(ctx, random_x()));
          break;
        default:
          y = rotate(y, random_angle());
      }
    }
    ++built;
    if (!is_invariant_ext(y)) o.fail("not invariant: " + y.to_string());
    Angle s = random_angle(), t = random_angle();
    if (!(rotate(rotate(y, t), s) == rotate(y, s + t))) o.fail("rotation law fails on " + y.to_string());
    FinitarySet x = random_x();
    if (!(project_to_gamma(lift_X(ctx, x)) == x)) o.fail("project(lift(X)) != X for " + x.to_string());
    GroupElem p = random_elem(rng, gp, 6);
    Angle theta = random_angle();
    if (!(rotate(make_Y_point(ctx, p, theta), t) == make_Y_point(ctx, p, theta - t)))
      o.fail("rotating Y_point fails at " + p.to_string());
  }
  double t = seconds_since(t0);
  if (t >= kLimitExtended) o.fail("took " + std::to_string(t) + " s");
  if (o.pass) o.detail = std::to_string(built) + " random sets, " + std::to_string(t) + " s";
  return o;
}

Outcome criterion10() {
  Outcome o;
  auto z = make_group(1);
  auto f = family(z, {{0}, {1}});
  auto report = condition_check(*f);
  auto n = is_bad(FinitarySet::atom(f, el(z, {0}), IndexSet{0}), report);
  if (!n.bad || !n.witness || !(*n.witness == el(z, {0}))) o.fail("N should be bad with witness 0");
  if (is_bad(FinitarySet::atom(f, el(z, {0}), IndexSet{1}), report).bad) o.fail("Z should be good");
  std::size_t sets = 0;
  for (auto& e : corpus()) {
    auto rep = condition_check(*e.family);
    for (const auto& x : invariant_sets(e)) {
      ++sets;
      if (is_bad(*e.family, x, rep).bad) o.fail("bad set over finite " + e.family->action().to_string());
    }
  }
  if (o.pass) o.detail = "fixtures exact, " + std::to_string(sets) + " finite invariant sets good";
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"finite ideal-lattice oracle", criterion1}, {"simplicity equivalence", criterion2},
      {"spectrum oracle", criterion3},             {"K-theory anchors", criterion4},
      {"SNF soundness", criterion5},               {"semigroup membership oracle", criterion6},
      {"condition fixtures", criterion7},          {"failing-case Prim fixture", criterion8},
      {"extended-set laws", criterion9},           {"badness fixtures", criterion10},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
