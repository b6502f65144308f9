#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "random_market.hpp"
#include "rftap/arbitrage.hpp"
#include "rftap/errors.hpp"
#include "rftap/hedging.hpp"
#include "rftap/pricing.hpp"

using namespace rftap;
using testkit::R;

namespace {

void expect_superhedges(const ModelFamily& f, const Claim& c, const HedgeResult& h,
                        std::span<const StaticOption> options = {}) {
  const Claim total = semi_static_gains(f, h.strategy, options, h.static_positions) + h.price - c;
  EXPECT_EQ(total, h.residuals);
  for (const auto& row : h.residuals.payoffs())
    for (const auto& r : row) EXPECT_GE(r, 0);
}

// Random families on which NRA holds.
std::vector<ModelFamily> nra_families(std::uint64_t seed, int draws) {
  std::mt19937_64 rng(seed);
  std::vector<ModelFamily> out;
  for (int i = 0; i < draws; ++i) {
    ModelFamily f = i % 3 == 0 ? build_toy(testkit::random_toy_params(rng, i % 2 == 0)) : testkit::random_family(rng);
    if (check_nra(f).holds) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

TEST(Superhedge, InstanceAMaxStock) {
  const ModelFamily f = testkit::instance_a();
  const auto h = superhedge(f, testkit::max_stock_a());
  EXPECT_EQ(h.price, 2);
  EXPECT_EQ(h.strategy.at_atom(1, 0, 0), 1);
  expect_superhedges(f, testkit::max_stock_a(), h);
}

TEST(Superhedge, PerModelAndWorstCase) {
  const ModelFamily f = testkit::instance_a();
  const auto first = per_model_superhedge(f, testkit::max_stock_a(), 0);
  EXPECT_EQ(first.price, R(3, 2));
  EXPECT_EQ(first.strategy.at_atom(1, 0, 0), R(3, 2));
  const auto second = per_model_superhedge(f, testkit::max_stock_a(), 1);
  EXPECT_EQ(second.price, R(3, 2));
  EXPECT_EQ(second.strategy.at_atom(1, 0, 0), R(3, 4));
  EXPECT_EQ(worst_case_price(f, testkit::max_stock_a()), R(3, 2));
  EXPECT_THROW(per_model_superhedge(f, testkit::max_stock_a(), 2), ThetaUnknown);
}

TEST(Superhedge, TwoPeriodStockPricesAtOne) {
  for (const auto& [s1, s2] : {std::pair{R(1), R(2)}, {R(1, 2), R(3)}, {R(2), R(2)}}) {
    const ModelFamily f = build_toy(testkit::two_period_params(R(0), s1, R(0), s2));
    const Claim c = Claim::price(f, 2);
    const auto h = superhedge(f, c);
    EXPECT_EQ(h.price, 1);
    for (std::size_t t = 1; t <= 2; ++t)
      for (std::size_t a = 0; a < f.space().num_atoms(t - 1); ++a) EXPECT_EQ(h.strategy.at_atom(t, a, 0), 1);
    expect_superhedges(f, c, h);
  }
}

TEST(Superhedge, ArbitrageFamilyThrows) {
  ToyParams p;
  p.models = {{"up", {R(3)}, {R(1)}}};
  const ModelFamily f = build_toy(p);
  EXPECT_THROW(superhedge(f, Claim::constant(f, R(1))), NraViolated);
  EXPECT_THROW(dp_superhedge(f, Claim::constant(f, R(1))), NraViolated);
  EXPECT_THROW(market_complete(f), NraViolated);
}

TEST(Superhedge, ShapeMismatchThrows) {
  EXPECT_THROW(superhedge(testkit::instance_a(), Claim(1, 2)), ShapeMismatch);
}

TEST(Subhedge, InstanceAMaxStock) {
  const ModelFamily f = testkit::instance_a();
  const auto h = subhedge(f, testkit::max_stock_a());
  EXPECT_EQ(h.price, 1);
  for (const auto& row : h.residuals.payoffs())
    for (const auto& r : row) EXPECT_LE(r, 0);
}

TEST(Subhedge, ConstantAndReplicableClaims) {
  const ModelFamily f = testkit::instance_b();
  EXPECT_EQ(subhedge(f, Claim::constant(f, R(5, 2))).price, R(5, 2));
  const Claim stock = Claim::price(f, 1);
  EXPECT_EQ(subhedge(f, stock).price, superhedge(f, stock).price);
}

TEST(Calibration, OptionPinsInstanceAPrice) {
  const ModelFamily f = testkit::instance_a();
  const Claim c = testkit::max_stock_a();
  const std::vector<StaticOption> options{{"shifted", c - R(3, 2), R(0)}};
  const auto h = superhedge(f, c, options);
  EXPECT_EQ(h.price, R(3, 2));
  expect_superhedges(f, c, h, options);
  const auto b = pricing_bounds(f, c, options);
  EXPECT_EQ(b.lo, R(3, 2));
  EXPECT_EQ(b.hi, R(3, 2));
}

TEST(Calibration, MispricedOptionRaisesNraViolated) {
  const ModelFamily f = testkit::instance_a();
  const std::vector<StaticOption> options{{"cheap", Claim::price(f, 1), R(0)}};
  EXPECT_THROW(superhedge(f, testkit::max_stock_a(), options), NraViolated);
}

TEST(Replicable, StockVector) {
  const ModelFamily f = build_toy(testkit::two_period_params(R(1, 3), R(1), R(-1, 2), R(2)));
  const auto rep = replicable(f, Claim::price(f, 2));
  ASSERT_TRUE(rep.has_value());
  EXPECT_EQ(rep->cost, 1);
  for (std::size_t t = 1; t <= 2; ++t)
    for (std::size_t a = 0; a < f.space().num_atoms(t - 1); ++a) EXPECT_EQ(rep->strategy.at_atom(t, a, 0), 1);
}

TEST(Replicable, MaxStockIsNot) { EXPECT_FALSE(replicable(testkit::instance_a(), testkit::max_stock_a())); }

TEST(Replicable, ConstantClaim) {
  const ModelFamily f = testkit::instance_b();
  const auto rep = replicable(f, Claim::constant(f, R(4)));
  ASSERT_TRUE(rep.has_value());
  EXPECT_EQ(rep->cost, 4);
  EXPECT_EQ(rep->strategy, PredictableStrategy::zero(f.space(), 1));
}

TEST(MarketComplete, SingleBinomialModel) {
  ToyParams p;
  p.models = {{"m", {R(1, 3)}, {R(1)}}};
  const auto r = market_complete(build_toy(p));
  EXPECT_TRUE(r.complete);
  EXPECT_FALSE(r.witness.has_value());
}

TEST(MarketComplete, InstanceAWitness) {
  const ModelFamily f = testkit::instance_a();
  const auto r = market_complete(f);
  EXPECT_FALSE(r.complete);
  EXPECT_EQ(r.witness_label, "1^{theta1}_Omega");
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(*r.witness, (Claim(RationalMatrix{{R(1), R(1)}, {R(0), R(0)}})));
  const auto b = pricing_bounds(f, *r.witness);
  EXPECT_LT(b.lo, b.hi);
}

TEST(MarketComplete, InstanceBIncomplete) { EXPECT_FALSE(market_complete(testkit::instance_b()).complete); }

TEST(DpSuperhedge, OnePeriodEqualsGlobal) {
  const ModelFamily f = testkit::instance_a();
  EXPECT_EQ(dp_superhedge(f, testkit::max_stock_a()), superhedge(f, testkit::max_stock_a()).price);
}

TEST(DpSuperhedge, ReplicableClaimEqualsCostInOneModel) {
  ToyParams p;
  p.horizon = 2;
  p.models = {{"m", {R(1, 2), R(-1, 3)}, {R(1), R(2)}}};
  const ModelFamily f = build_toy(p);
  const Claim c = Claim::price(f, 2).scaled(R(3)) + R(2);
  EXPECT_EQ(dp_superhedge(f, c), 5);
}

TEST(DpSuperhedge, ModelsAgreeingBeforeMaturityKeepReplicationCost) {
  ToyParams p;
  p.horizon = 2;
  p.models = {{"theta1", {R(0), R(0)}, {R(1), R(1)}}, {"theta2", {R(0), R(0)}, {R(1), R(2)}}};
  const ModelFamily f = build_toy(p);
  EXPECT_EQ(dp_superhedge(f, Claim::price(f, 2)), 1);
}

TEST(DpSuperhedge, TwoPeriodToyHasStrictGap) {
  const ModelFamily f = build_toy(testkit::two_period_params(R(0), R(1), R(0), R(2)));
  const Claim c = Claim::price(f, 2);
  EXPECT_EQ(superhedge(f, c).price, 1);
  EXPECT_EQ(dp_superhedge(f, c), 2);
}

TEST(WorstCasePrice, ArbitrageModelsWithoutFinitePriceAreSkipped) {
  // Instance B: each model gains strictly from one direction of trade.
  const ModelFamily f = testkit::instance_b();
  EXPECT_THROW(per_model_superhedge(f, testkit::max_stock_a(), 0), UnboundedBelow);
  EXPECT_THROW(worst_case_price(f, testkit::max_stock_a()), UnboundedBelow);
}

TEST(HedgingProperty, StrongDuality) {
  std::mt19937_64 rng(31);
  const auto families = nra_families(310, 150);
  ASSERT_GT(families.size(), 30u);
  for (const auto& f : families) {
    const Claim c = testkit::random_claim(rng, f);
    const auto b = pricing_bounds(f, c);
    const auto up = superhedge(f, c);
    const auto down = subhedge(f, c);
    EXPECT_EQ(up.price, b.hi);
    EXPECT_EQ(down.price, b.lo);
    EXPECT_LE(down.price, up.price);
    for (std::size_t k = 0; k < f.num_models(); ++k) {
      try {
        EXPECT_GE(up.price, per_model_superhedge(f, c, k).price);
      } catch (const UnboundedBelow&) {
      }
    }
    expect_superhedges(f, c, up);
    EXPECT_EQ(replicable(f, c).has_value(), b.lo == b.hi);
  }
}

TEST(HedgingProperty, CashTranslationAndHomogeneity) {
  std::mt19937_64 rng(32);
  for (const auto& f : nra_families(320, 120)) {
    const Claim c = testkit::random_claim(rng, f);
    const Rational base = superhedge(f, c).price;
    const Rational cash(testkit::uniform(rng, -9, 9), testkit::uniform(rng, 1, 5));
    const Rational lambda(testkit::uniform(rng, 0, 9), testkit::uniform(rng, 1, 5));
    EXPECT_EQ(superhedge(f, c + cash).price, base + cash);
    EXPECT_EQ(superhedge(f, c.scaled(lambda)).price, lambda * base);
  }
}

TEST(HedgingProperty, OptionsNeverRaiseThePrice) {
  std::mt19937_64 rng(33);
  int checked = 0;
  for (const auto& f : nra_families(330, 150)) {
    const Claim g = testkit::random_claim(rng, f);
    const auto gb = pricing_bounds(f, g);
    const std::vector<StaticOption> options{{"g", g, (gb.lo + 2 * gb.hi) / 3}};
    if (!check_nra(f, options).holds) continue;
    const Claim c = testkit::random_claim(rng, f);
    const auto h = superhedge(f, c, options);
    EXPECT_LE(h.price, superhedge(f, c).price);
    EXPECT_EQ(h.price, pricing_bounds(f, c, options).hi);
    expect_superhedges(f, c, h, options);
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(HedgingProperty, DpDominatesGlobalPrice) {
  std::mt19937_64 rng(34);
  for (const auto& f : nra_families(340, 120)) {
    const Claim c = testkit::random_claim(rng, f);
    const Rational global = superhedge(f, c).price;
    const Rational dp = dp_superhedge(f, c);
    EXPECT_GE(dp, global);
    if (f.horizon() == 1) EXPECT_EQ(dp, global);
    if (f.num_models() == 1)
      if (auto rep = replicable(f, c)) EXPECT_EQ(dp, rep->cost);
  }
}

TEST(HedgingProperty, CompletenessMatchesCollapsingBounds) {
  for (const auto& f : nra_families(350, 150)) {
    bool collapse = true;
    for (std::size_t k = 0; k < f.num_models() && collapse; ++k)
      for (std::size_t omega = 0; omega < f.num_outcomes() && collapse; ++omega) {
        const std::size_t one[] = {omega};
        const auto b = pricing_bounds(f, Claim::indicator(f, k, one));
        collapse = b.lo == b.hi;
      }
    const auto report = market_complete(f);
    EXPECT_EQ(report.complete, collapse);
    if (!report.complete) EXPECT_FALSE(replicable(f, *report.witness).has_value());
  }
}
