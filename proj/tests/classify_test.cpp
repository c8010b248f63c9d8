#include <random>

#include <gtest/gtest.h>

#include "cuntz/classify.hpp"
#include "test_support.hpp"

using namespace cuntz;
using namespace testing_support;

namespace {

std::vector<GroupPtr> corpus_groups() {
  std::vector<GroupPtr> gs;
  for (long long k = 2; k <= 12; ++k) gs.push_back(make_group(0, {k}));
  gs.push_back(make_group(0, {2, 2}));
  gs.push_back(make_group(0, {2, 4}));
  return gs;
}

// Spectrum straight from its definition on the ideal lattice.
FiniteSet brute_spectrum(const SemigroupFamily& f) {
  auto sets = brute_force_invariant_sets(f);
  auto e = enumerate_group(f);
  std::vector<GroupElem> keep;
  for (std::size_t k = 0; k < e->order(); ++k) {
    GroupElem g = e->element_at(k);
    bool ok = true;
    for (const auto& x : sets) ok = ok && x.translated(g).subset_of(x);
    if (ok) keep.push_back(g);
  }
  return FiniteSet::of(e, keep);
}

}  // namespace

TEST(Classify, SimplicityFixtures) {
  auto z = make_group(1);
  EXPECT_TRUE(is_simple(*family(z, {{1}, {1}})));
  EXPECT_FALSE(is_simple(*family(z, {{2}, {2}})));
  EXPECT_TRUE(is_simple(*family(make_group(0, {3}), {{1}, {1}})));
  EXPECT_FALSE(is_simple(*family(z, {{0}, {1}})));
}

TEST(Classify, PrimitivityFixtures) {
  auto z = make_group(1);
  EXPECT_FALSE(is_primitive(*family(z, {{2}, {2}})));
  EXPECT_TRUE(is_primitive(*family(z, {{0}, {1}})));
  EXPECT_TRUE(is_primitive(*family(make_group(0), {{}, {}})));
}

TEST(Classify, SpectrumFixtures) {
  auto z = make_group(1);
  auto z4 = make_group(0, {4});
  auto s1 = strong_connes_spectrum(family(z4, {{2}, {2}}));
  ASSERT_TRUE(s1.explicit_set);
  EXPECT_EQ(s1.explicit_set->to_string(), "{0, 2}");
  auto s2 = strong_connes_spectrum(family(z, {{0}, {1}}));
  EXPECT_EQ(s2.description, "N");
  EXPECT_TRUE(s2.contains(el(z, {3})));
  EXPECT_FALSE(s2.contains(el(z, {-1})));
  EXPECT_EQ(strong_connes_spectrum(family(z, {{1}, {1}})).description, "Z");
}

TEST(Classify, SpectrumIsSubsemigroup) {
  std::mt19937_64 rng(11);
  auto g = make_group(1, {2});
  for (int trial = 0; trial < 10; ++trial) {
    auto f = random_family(rng, g, 3, 3);
    auto sp = strong_connes_spectrum(f);
    EXPECT_TRUE(sp.contains(GroupElem::zero(g)));
    for (int k = 0; k < 100; ++k) {
      auto a = random_elem(rng, g, 4), b = random_elem(rng, g, 4);
      if (sp.contains(a) && sp.contains(b)) {
        EXPECT_TRUE(sp.contains(a + b));
      }
    }
  }
}

TEST(Classify, IndexClassFixtures) {
  auto z = make_group(1);
  auto c1 = index_class_reps(*family(z, {{0}, {1}}));
  ASSERT_EQ(c1.size(), 2u);
  EXPECT_EQ(c1[0].rep.to_string(), "{1}");
  EXPECT_EQ(c1[0].members.size(), 1u);
  EXPECT_EQ(c1[1].rep.to_string(), "{2}");
  EXPECT_EQ(c1[1].members.size(), 2u);
  EXPECT_EQ(index_class_reps(*family(z, {{1}, {1}})).size(), 1u);
  EXPECT_EQ(index_class_reps(*family(make_group(0, {4}), {{2}, {2}})).size(), 1u);
}

TEST(Classify, PrimFixtures) {
  auto z = make_group(1);
  auto p1 = primitive_ideal_space(*family(z, {{0}, {1}}));
  EXPECT_FALSE(p1.condition_held);
  ASSERT_EQ(p1.components.size(), 2u);
  EXPECT_EQ(p1.components[0].description(), "Z x T");
  EXPECT_TRUE(p1.components[0].circle);
  EXPECT_EQ(p1.components[1].description(), "point");
  auto p2 = primitive_ideal_space(*family(z, {{1}, {1}}));
  ASSERT_EQ(p2.components.size(), 1u);
  EXPECT_EQ(p2.components[0].description(), "point");
  auto p3 = primitive_ideal_space(*family(make_group(0, {4}), {{2}, {2}}));
  ASSERT_EQ(p3.components.size(), 1u);
  EXPECT_EQ(p3.components[0].description(), "Z/2");
}

TEST(Classify, CircleMarkerOnlyWhenConditionFails) {
  auto g = make_group(1, {2});
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto f = random_family(rng, g, 2 + trial % 2, 2);
    auto p = primitive_ideal_space(*f);
    std::size_t circles = 0;
    for (const auto& c : p.components) circles += c.circle;
    EXPECT_EQ(circles, p.condition_held ? 0u : 1u);
    auto classes = index_class_reps(*f);
    for (std::size_t a = 0; a < classes.size(); ++a)
      for (std::size_t b = a + 1; b < classes.size(); ++b)
        EXPECT_FALSE(semigroups_equal(f->semigroup(classes[a].rep), f->semigroup(classes[b].rep)));
  }
}

TEST(Classify, FiniteCorpusOracles) {
  std::mt19937_64 rng(2024);
  for (auto g : corpus_groups()) {
    for (int trial = 0; trial < 20; ++trial) {
      auto f = random_family(rng, g, 2 + trial % 2, 12);
      auto sets = brute_force_invariant_sets(*f);
      bool simple = is_simple(*f);
      EXPECT_EQ(simple, sets.size() == 2) << f->action().to_string();
      EXPECT_EQ(simple, is_primitive(*f));
      auto sp = strong_connes_spectrum(f);
      ASSERT_TRUE(sp.explicit_set);
      EXPECT_EQ(*sp.explicit_set, brute_spectrum(*f)) << f->action().to_string();

      // Components count the prime invariant sets after identifying translates.
      std::size_t primes = 0;
      for (const auto& x : sets)
        if (!x.is_empty() && is_prime(*f, x).prime) ++primes;
      auto p = primitive_ideal_space(*f);
      std::size_t points = 0;
      for (const auto& c : p.components) points += c.space.order()->convert_to<std::size_t>();
      EXPECT_EQ(points, primes);
      EXPECT_TRUE(p.condition_held);
    }
  }
}

TEST(Classify, ClosedSetChecker) {
  auto z = make_group(1);
  auto f = family(z, {{0}, {1}});
  auto ctx = normalize_failing(f);
  auto y = lift_X(ctx, FinitarySet::atom(f, el(z, {2}), IndexSet{}));
  EXPECT_TRUE(closed_set_contains(y, el(z, {5}), IndexSet{}));
  EXPECT_FALSE(closed_set_contains(y, el(z, {1}), IndexSet{}));
  EXPECT_FALSE(closed_set_contains(y, el(z, {5}), IndexSet{1}));
  EXPECT_FALSE(closed_set_contains(make_Y_point(ctx, el(ctx->gamma_prime_group(), {0}), Angle(0, 1)), el(z, {0}), IndexSet{}));
}

TEST(Classify, CompactDual) {
  auto r1 = analyze_compact_dual(1, {{Rational(1, 2)}});
  EXPECT_EQ(r1.group_string(), "Z/2");
  EXPECT_EQ(r1.prim_string(), "T");
  EXPECT_EQ(analyze_compact_dual(1, {{Rational(0)}}).group_string(), "0");
  auto r3 = analyze_compact_dual(2, {{Rational(1, 2), Rational(0)}, {Rational(0), Rational(1, 3)}});
  EXPECT_EQ(r3.group_string(), "Z/2 x Z/3");
  EXPECT_EQ(r3.invariant_factors, std::vector<Integer>{6});
  EXPECT_EQ(r3.prim_string(), "T^2");
  auto r4 = analyze_compact_dual(2, {{Rational(1, 4), Rational(0)}, {Rational(0), Rational(1, 2)}});
  EXPECT_EQ(r4.order, 8);
  EXPECT_EQ(r4.invariant_factors, (std::vector<Integer>{2, 4}));
  EXPECT_EQ(analyze_compact_dual(2, {{Rational(1, 4), Rational(1, 2)}, {Rational(1, 2), Rational(0)}}).group_string(), "Z/4");
  EXPECT_THROW(analyze_compact_dual(2, {{Rational(1, 2)}}), ParseError);
  EXPECT_THROW(parse_rational("0.5"), ParseError);
  EXPECT_EQ(parse_rational("\"3/6\""), Rational(1, 2));
}

TEST(Classify, InvariantFactorChain) {
  EXPECT_EQ(invariant_factor_chain({2, 3, 2, 3}), (std::vector<Integer>{6, 6}));
  EXPECT_EQ(invariant_factor_chain({4, 2, 3}), (std::vector<Integer>{2, 12}));
  EXPECT_EQ(primary_decomposition({12}), (std::vector<Integer>{4, 3}));
}
