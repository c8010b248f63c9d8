#include <random>

#include <gtest/gtest.h>

#include "cuntz/extended_sets.hpp"
#include "test_support.hpp"

using namespace cuntz;
using namespace testing_support;

namespace {

struct Fixture {
  FamilyPtr family;
  NormalizedPtr ctx;
};

Fixture z_fixture() {
  auto f = family(make_group(1), {{0}, {1}});
  return {f, normalize_failing(f)};
}

Fixture zz2_fixture() {
  auto f = family(make_group(1, {2}), {{0, 1}, {1, 0}});
  return {f, normalize_failing(f)};
}

Angle random_angle(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> q(1, 12);
  int d = q(rng);
  return Angle(static_cast<long long>(rng() % static_cast<unsigned>(d)), d);
}

FinitarySet random_invariant(std::mt19937_64& rng, const FamilyPtr& f) {
  for (;;) {
    std::vector<Atom> as;
    for (int k = 1 + static_cast<int>(rng() % 2); k > 0; --k)
      as.push_back(Atom{random_elem(rng, f->group(), 6), IndexSet::from_bits(static_cast<std::uint32_t>(rng() % (1u << f->n())))});
    FinitarySet x(f, as);
    if (x.is_invariant()) return x;
  }
}

ExtSet random_Y(std::mt19937_64& rng, const Fixture& fx, int depth = 0) {
  switch (depth > 2 ? rng() % 2 : rng() % 4) {
    case 0:
      return make_Y_point(fx.ctx, fx.ctx->project(random_elem(rng, fx.family->group(), 6)), random_angle(rng));
    case 1:
      return lift_X(fx.ctx, random_invariant(rng, fx.family));
    case 2:
      return random_Y(rng, fx, depth + 1).united(random_Y(rng, fx, depth + 1));
    default:
      return rotate(random_Y(rng, fx, depth + 1), random_angle(rng));
  }
}

}  // namespace

TEST(AngleTest, ParsingAndArithmetic) {
  EXPECT_EQ(parse_angle("\"1/2\"").to_string(), "1/2");
  EXPECT_EQ(parse_angle("-1/2"), Angle(1, 2));
  EXPECT_EQ(parse_angle("3/2"), Angle(1, 2));
  EXPECT_EQ(parse_angle("0").to_string(), "0/1");
  EXPECT_EQ(parse_angle("4/6").to_string(), "2/3");
  EXPECT_THROW(parse_angle("1/0"), ParseError);
  EXPECT_THROW(parse_angle("0.5"), ParseError);
  EXPECT_EQ(Angle(1, 3) + Angle(2, 3), Angle());
  EXPECT_EQ(-Angle(1, 4), Angle(3, 4));
}

TEST(Normalize, Fixtures) {
  auto f = family(make_group(1), {{1}, {0}});
  auto n = normalize_failing(f);
  EXPECT_EQ(n->failing, 1u);
  EXPECT_EQ(n->permutation, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(n->permuted->omega[0], el(f->group(), {0}));
  EXPECT_EQ(n->K, 1);
  EXPECT_EQ(*n->gamma_prime_group(), (GroupSpec{1, {}}));

  auto g = zz2_fixture();
  EXPECT_EQ(g.ctx->K, 2);
  EXPECT_EQ(*g.ctx->gamma_prime_group(), (GroupSpec{1, {}}));
  EXPECT_EQ(g.ctx->failing, 0u);

  auto h = z_fixture();
  EXPECT_EQ(h.ctx->permutation, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(h.ctx->K, 1);

  EXPECT_THROW(normalize_failing(family(make_group(1), {{1}, {1}})), PreconditionError);
}

TEST(YPoint, Fixtures) {
  auto fx = z_fixture();
  auto gp = [&](long long v) { return fx.ctx->project(el(fx.family->group(), {v})); };
  auto y = make_Y_point(fx.ctx, gp(0), Angle());
  EXPECT_TRUE(y.contains(gp(0), Angle()));
  EXPECT_FALSE(y.contains(gp(0), Angle(1, 2)));
  EXPECT_FALSE(y.fiber_full(gp(0)));
  for (long long k = 1; k < 10; ++k) EXPECT_TRUE(y.fiber_full(gp(k)));
  EXPECT_FALSE(y.support_contains(gp(-1)));

  auto y5 = make_Y_point(fx.ctx, gp(5), parse_angle("1/2"));
  EXPECT_TRUE(y5.contains(gp(5), Angle(1, 2)));
  EXPECT_FALSE(y5.support_contains(gp(4)));
  EXPECT_TRUE(y5.fiber_full(gp(6)));

  auto gx = zz2_fixture();
  auto g = gx.family->group();
  auto yz = make_Y_point(gx.ctx, gx.ctx->project(el(g, {0, 0})), Angle());
  EXPECT_TRUE(yz.contains(gx.ctx->project(el(g, {0, 1})), Angle()));
  EXPECT_FALSE(yz.fiber_full(gx.ctx->project(el(g, {0, 1}))));
  EXPECT_TRUE(yz.fiber_full(gx.ctx->project(el(g, {1, 1}))));
  EXPECT_TRUE(is_invariant_ext(yz));
}

TEST(YPoint, InvarianceFixtures) {
  auto fx = z_fixture();
  auto gp0 = fx.ctx->project(el(fx.family->group(), {0}));
  EXPECT_TRUE(is_invariant_ext(make_Y_point(fx.ctx, gp0, Angle())));
  ExtSet::PointMap lone;
  lone[gp0].insert(Angle());
  ExtSet bare(fx.ctx, lone, FinitarySet(fx.family));
  EXPECT_FALSE(is_invariant_ext(bare));
  EXPECT_EQ(invariance_violation_ext(bare), gp0);
  EXPECT_TRUE(is_invariant_ext(ExtSet::empty(fx.ctx)));
  EXPECT_THROW(project_to_gamma(bare), PreconditionError);
}

TEST(Projection, Fixtures) {
  auto fx = z_fixture();
  auto z = fx.family->group();
  auto nat = FinitarySet::atom(fx.family, el(z, {0}), {});
  auto y = make_Y_point(fx.ctx, fx.ctx->project(el(z, {0})), Angle());
  EXPECT_EQ(project_to_gamma(y), nat);
  EXPECT_TRUE(project_to_gamma(ExtSet::empty(fx.ctx)).is_empty());
  EXPECT_EQ(project_to_gamma(lift_X(fx.ctx, nat)), nat);
  EXPECT_EQ(restrict_to_gamma_margin(y), FinitarySet::atom(fx.family, el(z, {1}), {}));
  EXPECT_TRUE(restrict_to_gamma_margin(ExtSet::empty(fx.ctx)).is_empty());
  auto whole = FinitarySet::atom(fx.family, el(z, {0}), IndexSet{0, 1});
  EXPECT_EQ(restrict_to_gamma_margin(lift_X(fx.ctx, whole)), whole);
}

TEST(Projection, FailingCaseMakesEveryFinitarySetInvariant) {
  // -omega_f = (K-1) omega_f lies in Omega, so every base has a predecessor.
  std::mt19937_64 rng(52);
  for (const auto& fx : {z_fixture(), zz2_fixture()}) {
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Atom> as{Atom{random_elem(rng, fx.family->group(), 6), {}}};
      FinitarySet x(fx.family, as);
      EXPECT_TRUE(x.is_invariant());
      EXPECT_EQ(project_to_gamma(lift_X(fx.ctx, x)), x);
    }
  }
}

TEST(Rotation, Fixtures) {
  auto fx = z_fixture();
  auto gp = fx.ctx->project(el(fx.family->group(), {3}));
  auto y = make_Y_point(fx.ctx, gp, Angle(1, 3));
  EXPECT_EQ(rotate(y, Angle(1, 4)), make_Y_point(fx.ctx, gp, Angle(1, 3) - Angle(1, 4)));
  EXPECT_EQ(rotate(y, Angle()), y);
  auto full = lift_X(fx.ctx, FinitarySet::atom(fx.family, el(fx.family->group(), {0}), IndexSet{1}));
  EXPECT_EQ(rotate(full, Angle(2, 7)), full);
  EXPECT_NE(rotate(y, Angle(1, 4)), y);
}

TEST(Badness, ExtensionWitnessesNonGaugeInvariantSets) {
  auto fx = z_fixture();
  auto z = fx.family->group();
  auto nat = FinitarySet::atom(fx.family, el(z, {0}), {});
  auto y = bad_extension(fx.ctx, nat);
  EXPECT_TRUE(is_invariant_ext(y));
  EXPECT_TRUE(y.subset_of(lift_X(fx.ctx, nat)));
  EXPECT_NE(y, lift_X(fx.ctx, nat));
  EXPECT_EQ(project_to_gamma(y), nat);
  auto whole = FinitarySet::atom(fx.family, el(z, {0}), IndexSet{1});
  EXPECT_EQ(bad_extension(fx.ctx, whole), lift_X(fx.ctx, whole));
}

TEST(ExtendedLaws, RandomSets) {
  std::mt19937_64 rng(51);
  for (const auto& fx : {z_fixture(), zz2_fixture()}) {
    auto pts = box(fx.family->group(), 12);
    for (int trial = 0; trial < 60; ++trial) {
      ExtSet y = random_Y(rng, fx);
      ASSERT_TRUE(is_invariant_ext(y)) << y.to_string();
      Angle s = random_angle(rng), t = random_angle(rng);
      EXPECT_EQ(rotate(rotate(y, s), t), rotate(y, s + t));
      EXPECT_EQ(rotate(y, Angle()), y);
      EXPECT_EQ(y.canonical(), y);
      EXPECT_TRUE(is_invariant_ext(rotate(y, s)));

      ExtSet y2 = y.united(random_Y(rng, fx));
      EXPECT_TRUE(y.subset_of(y2));
      EXPECT_TRUE(project_to_gamma(y).subset_of(project_to_gamma(y2)));

      auto x = random_invariant(rng, fx.family);
      EXPECT_EQ(project_to_gamma(lift_X(fx.ctx, x)), x);

      auto gp = fx.ctx->project(random_elem(rng, fx.family->group(), 6));
      Angle th = random_angle(rng);
      EXPECT_EQ(rotate(make_Y_point(fx.ctx, gp, th), t), make_Y_point(fx.ctx, gp, th - t));

      for (const auto& p : pts) {
        auto c = fx.ctx->project(p);
        if (!y.support_contains(c)) continue;
        EXPECT_TRUE(project_to_gamma(y).contains(p));
        for (std::size_t i = 0; i < fx.family->n(); ++i)
          if (i != fx.ctx->failing) {
            EXPECT_TRUE(y.fiber_full(fx.ctx->project(p + fx.family->omega(i))));
            EXPECT_TRUE(restrict_to_gamma_margin(y).contains(p + fx.family->omega(i)));
          }
      }
    }
  }
}
