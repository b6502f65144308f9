#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "lp_oracle.hpp"
#include "random_market.hpp"
#include "rftap/arbitrage.hpp"
#include "rftap/errors.hpp"
#include "rftap/martingale.hpp"
#include "rftap/pricing.hpp"
#include "rftap/toy.hpp"

using namespace rftap;
using testkit::R;

TEST(BuildToy, InstanceAPrices) {
  const ModelFamily f = testkit::instance_a();
  EXPECT_EQ(f.space().outcomes(), (std::vector<std::string>{"+", "-"}));
  EXPECT_EQ(f.thetas(), (std::vector<std::string>{"theta1", "theta2"}));
  EXPECT_EQ(f.increment(1, 1, 0, 0), 2);
  EXPECT_EQ(f.increment(1, 1, 1, 0), -2);
  EXPECT_EQ(f.increment(0, 1, 0, 0), 1);
  EXPECT_EQ(f.process(0)(0, 0, 0), 1);
}

TEST(BuildToy, InstanceBIncrements) {
  const ModelFamily f = testkit::instance_b();
  EXPECT_EQ(f.increment(0, 1, 0, 0), 3);
  EXPECT_EQ(f.increment(0, 1, 1, 0), 1);
  EXPECT_EQ(f.increment(1, 1, 0, 0), -1);
  EXPECT_EQ(f.increment(1, 1, 1, 0), -3);
}

TEST(BuildToy, TwoPeriodSpace) {
  ToyParams p;
  p.horizon = 2;
  p.s0 = 10;
  p.models = {{"m", {R(1), R(-1)}, {R(2), R(3)}}};
  const ModelFamily f = build_toy(p);
  EXPECT_EQ(f.space().outcomes(), (std::vector<std::string>{"++", "+-", "-+", "--"}));
  for (std::size_t omega = 0; omega < 4; ++omega) EXPECT_EQ(f.space().prob(omega), R(1, 4));
  EXPECT_EQ(f.space().num_atoms(1), 2u);
  // "+-": 10 + (1 + 2) + (-1 - 3).
  EXPECT_EQ(f.process(0)(1, 1, 0), 13);
  EXPECT_EQ(f.process(0)(2, 1, 0), 9);
  EXPECT_FALSE(validate_adapted(f.space(), f.process(0)).has_value());
}

TEST(BuildToy, ProbabilityOverride) {
  ToyParams p = testkit::instance_a_params();
  p.prob = RationalVector{R(1, 3), R(2, 3)};
  EXPECT_EQ(build_toy(p).space().prob(1), R(2, 3));
  p.prob = RationalVector{R(1, 3)};
  EXPECT_THROW(build_toy(p), ShapeMismatch);
  p.prob = RationalVector{R(1, 3), R(1, 3)};
  EXPECT_THROW(build_toy(p), MeasureError);
}

TEST(BuildToy, ParamErrors) {
  ToyParams p = testkit::instance_a_params();
  p.models[1].sigma[0] = 0;
  EXPECT_THROW(build_toy(p), ParamError);
  p = testkit::instance_a_params();
  p.models[0].mu.push_back(R(1));
  EXPECT_THROW(build_toy(p), ParamError);
  p.models.clear();
  EXPECT_THROW(build_toy(p), ParamError);
  EXPECT_THROW(toy_space(0), ParamError);
}

TEST(ToyEmm, Examples) {
  EXPECT_EQ(toy_emm(R(0), R(1)), (std::map<int, Rational>{{1, R(1, 2)}, {-1, R(1, 2)}}));
  EXPECT_EQ(toy_emm(R(1, 2), R(1)), (std::map<int, Rational>{{1, R(1, 4)}, {-1, R(3, 4)}}));
  EXPECT_THROW(toy_emm(R(1), R(1)), DomainError);
  EXPECT_THROW(toy_emm(R(-3), R(2)), DomainError);
}

TEST(ToyEmm, MakesStockAMartingale) {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 40; ++i) {
    const Rational sigma(testkit::uniform(rng, 1, 5), testkit::uniform(rng, 1, 3));
    const Rational mu = Rational(testkit::uniform(rng, -9, 9), 10) * sigma;
    ToyParams p;
    p.models = {{"m", {mu}, {sigma}}};
    const ModelFamily f = build_toy(p);
    const auto q = toy_emm(mu, sigma);
    const RobustPricingSystem system(RationalMatrix{{q.at(1), q.at(-1)}});
    EXPECT_FALSE(is_gen_martingale(f, system, price_process(f)).has_value());
    const auto classical = check_classical_na(f, 0);
    ASSERT_TRUE(classical.holds);
    EXPECT_EQ(*classical.martingale_measure, (RationalVector{q.at(1), q.at(-1)}));
  }
}

TEST(ExplicitFamily, Examples) {
  const ToyParams p = testkit::instance_a_params();
  EXPECT_EQ(explicit_family(p, {R(1), R(0)}).weights(), (RationalMatrix{{R(1, 2), R(1, 2)}, {R(0), R(0)}}));
  EXPECT_EQ(explicit_family(p, {R(0), R(0)}).weights(), (RationalMatrix{{R(0), R(0)}, {R(1, 2), R(1, 2)}}));
  EXPECT_THROW(explicit_family(p, {R(1, 2), R(1000000)}), RegionError);
  EXPECT_THROW(explicit_family(testkit::instance_b_params(), {R(1), R(0)}), RegionError);
}

TEST(ExplicitFamily, NonzeroBetaLeavesTheSegment) {
  // Convex combinations of the corner systems have theta1 block (a/2, a/2).
  const ToyParams p = testkit::instance_a_params();
  const FamilyPoint pt{R(1, 2), R(1, 4)};
  ASSERT_TRUE(family_region_check(p, pt));
  const auto q = explicit_family(p, pt);
  EXPECT_FALSE(verify_pricing_system(build_toy(p), q).has_value());
  EXPECT_NE(q(0, 0), q(0, 1));
}

TEST(FamilyRegion, Examples) {
  ToyParams p = testkit::instance_a_params();
  EXPECT_TRUE(family_region_check(p, {R(1), R(0)}));
  EXPECT_TRUE(family_region_check(p, {R(0), R(0)}));
  p.models = {{"a", {R(0)}, {R(1)}}, {"b", {R(0)}, {R(1)}}};
  EXPECT_FALSE(family_region_check(p, {R(1, 2), R(1000000)}));
  p.models.pop_back();
  EXPECT_THROW(family_region_check(p, {R(1), R(0)}), ParamError);
}

TEST(FamilyRegion, PositiveAlphaIffFirstModelIsPriced) {
  std::mt19937_64 rng(52);
  int priced = 0;
  for (int i = 0; i < 150; ++i) {
    ToyParams p;
    for (const char* name : {"a", "b"}) {
      const Rational sigma(testkit::uniform(rng, 1, 3));
      p.models.push_back({name, {Rational(testkit::uniform(rng, -8, 8), 4) * sigma}, {sigma}});
    }
    // Max alpha over the region, by vertex enumeration.
    lp::LinearProgram region;
    const std::size_t a = region.add_variable("alpha", lp::Bounds::boxed(R(0), R(1)));
    const std::size_t b = region.add_variable("beta", lp::Bounds::free());
    const Rational &m1 = p.models[0].mu[0], &s1 = p.models[0].sigma[0];
    const Rational &m2 = p.models[1].mu[0], &s2 = p.models[1].sigma[0];
    const auto band = [&](std::vector<lp::Term> terms, const Rational& shift, const Rational& hi) {
      region.add_constraint(terms, lp::Relation::GreaterEqual, -shift);
      region.add_constraint(terms, lp::Relation::LessEqual, hi - shift);
    };
    band({{b, R(1)}, {a, s1 - m1}}, R(0), 2 * s1);
    band({{b, R(-1)}, {a, s1 + m1}}, R(0), 2 * s1);
    band({{b, R(-1)}, {a, m2 - s2}}, s2 - m2, 2 * s2);
    band({{b, R(1)}, {a, -s2 - m2}}, s2 + m2, 2 * s2);
    region.set_objective(lp::Sense::Maximize, {{a, R(1)}});
    const auto best = testkit::brute_force(region);
    const bool positive = best.status == lp::Status::Optimal && best.value > 0;
    const auto q = find_pricing_system(build_toy(p), 0);
    EXPECT_EQ(positive, q.has_value()) << "draw " << i;
    if (q) {
      EXPECT_EQ(q->mass(0), best.value);
      ++priced;
    }
  }
  EXPECT_GT(priced, 30);
  EXPECT_LT(priced, 150);
}

TEST(LearningGrid, Counts) {
  const auto one = learning_grid(1, {{{R(0), R(1)}}}, 100);
  EXPECT_EQ(one.family.num_models(), 1u);
  EXPECT_EQ(one.total, 1);

  const auto two = learning_grid(1, {{{R(0), R(1)}, {R(0), R(2)}}}, 100);
  EXPECT_EQ(two.family.num_models(), 2u);
  const ModelFamily a = testkit::instance_a();
  for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(two.family.process(k), a.process(k));

  const std::vector<GridPoint> g{{R(0), R(1)}, {R(0), R(2)}};
  const auto eight = learning_grid(2, {g, g}, 100);
  EXPECT_EQ(eight.family.num_models(), 8u);
  EXPECT_EQ(eight.total, 8);
  EXPECT_FALSE(eight.cap_exceeded);
  EXPECT_EQ(eight.family.thetas().front(), "u[0|0,0]");
  EXPECT_EQ(eight.family.thetas().back(), "u[1|1,1]");
  // u[0|1,0]: sigma 1 first, then sigma 2 after "+", sigma 1 after "-".
  const AdaptedProcess& s = eight.family.process(2);
  EXPECT_EQ(s(2, 0, 0), 4);
  EXPECT_EQ(s(2, 3, 0), -1);
}

TEST(LearningGrid, CapTruncates) {
  const std::vector<GridPoint> g{{R(0), R(1)}, {R(0), R(2)}, {R(1, 2), R(1)}};
  const auto capped = learning_grid(2, {g, g}, 5);
  EXPECT_TRUE(capped.cap_exceeded);
  EXPECT_EQ(capped.total, 27);
  EXPECT_EQ(capped.family.num_models(), 5u);
  const auto full = learning_grid(2, {g, g}, 27);
  EXPECT_FALSE(full.cap_exceeded);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(capped.family.thetas()[k], full.family.thetas()[k]);
}

TEST(LearningGrid, Errors) {
  const std::vector<GridPoint> g{{R(0), R(1)}};
  EXPECT_THROW(learning_grid(1, {g}, 0), ParamError);
  EXPECT_THROW(learning_grid(2, {g}, 10), ParamError);
  EXPECT_THROW(learning_grid(1, {{}}, 10), ParamError);
  EXPECT_THROW(learning_grid(1, {{{R(0), R(-1)}}}, 10), ParamError);
}
