#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "random_market.hpp"
#include "rftap/errors.hpp"
#include "rftap/martingale.hpp"
#include "rftap/pricing.hpp"

using namespace rftap;
using testkit::R;

namespace {

// M^theta_t = slope * t in every model.
VectorProcess drift(const ModelFamily& f, long slope) {
  VectorProcess m;
  for (std::size_t k = 0; k < f.num_models(); ++k) {
    AdaptedProcess p(f.horizon(), f.num_outcomes(), 1);
    for (std::size_t t = 0; t <= f.horizon(); ++t)
      for (std::size_t omega = 0; omega < f.num_outcomes(); ++omega) p(t, omega, 0) = Rational(slope * static_cast<long>(t));
    m.push_back(std::move(p));
  }
  return m;
}

RationalMatrix add(const RationalMatrix& a, const RationalMatrix& b, const Rational& scale = Rational(1)) {
  RationalMatrix out = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] += scale * b[i][j];
  return out;
}

// Every (family, system charging some model) pair from a few random draws.
struct Priced {
  ModelFamily family;
  RobustPricingSystem system;
};

std::vector<Priced> priced_families(std::uint64_t seed, int draws) {
  std::mt19937_64 rng(seed);
  std::vector<Priced> out;
  for (int i = 0; i < draws; ++i) {
    ModelFamily f = i % 2 ? testkit::random_family(rng) : build_toy(testkit::random_toy_params(rng, true));
    const std::size_t k = static_cast<std::size_t>(testkit::uniform(rng, 0, static_cast<long>(f.num_models()) - 1));
    if (auto q = find_pricing_system(f, k)) out.push_back({std::move(f), std::move(*q)});
  }
  return out;
}

}  // namespace

TEST(GenCondExp, SingleModelIsClassical) {
  ToyParams p;
  p.horizon = 2;
  p.models = {{"m", {R(1, 2), R(-1, 4)}, {R(1), R(1)}}};
  const ModelFamily f = build_toy(p);
  const auto q1 = toy_emm(R(1, 2), R(1));
  const auto q2 = toy_emm(R(-1, 4), R(1));
  RationalMatrix w(1, RationalVector(4));
  const int signs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (int o = 0; o < 4; ++o) w[0][o] = q1.at(signs[o][0]) * q2.at(signs[o][1]);
  const RobustPricingSystem q(w);
  ASSERT_FALSE(verify_pricing_system(f, q).has_value());

  const Claim c(RationalMatrix{{R(4), R(0), R(-2), R(6)}});
  const auto ce = gen_cond_expectation(f, q, c, 1);
  EXPECT_TRUE(ce.kernel_basis.empty());
  ASSERT_EQ(ce.particular.size(), 1u);
  EXPECT_EQ(ce.particular[0][0], q2.at(1) * 4 + q2.at(-1) * 0);
  EXPECT_EQ(ce.particular[0][1], q2.at(1) * -2 + q2.at(-1) * 6);
}

TEST(GenCondExp, NormalizedProductSystemContainsS1) {
  const ToyParams p = testkit::two_period_params(R(0), R(1), R(0), R(2));
  const ModelFamily f = build_toy(p);
  const RobustPricingSystem q = testkit::product_system(p);
  ASSERT_FALSE(verify_pricing_system(f, q).has_value());
  const auto ce = gen_cond_expectation(f, q, Claim::price(f, 2), 1);
  EXPECT_EQ(ce.kernel_basis.size(), 2u);
  EXPECT_TRUE(ce.contains(atom_values(f.space(), Claim::price(f, 1), 1)));
  EXPECT_FALSE(ce.contains(add(atom_values(f.space(), Claim::price(f, 1), 1), {{R(1), R(0)}, {R(0), R(0)}})));
}

TEST(GenCondExp, ZeroClaimKernelIsHomogeneous) {
  const ToyParams p = testkit::two_period_params(R(0), R(1), R(0), R(2));
  const ModelFamily f = build_toy(p);
  const RobustPricingSystem q = testkit::product_system(p);
  const auto ce = gen_cond_expectation(f, q, Claim(2, 4), 1);
  for (const auto& row : ce.particular)
    for (const auto& v : row) EXPECT_EQ(v, 0);
  for (const auto& b : ce.kernel_basis) {
    const Claim lifted = ce.as_claim(f.space(), b);
    for (std::size_t a = 0; a < 2; ++a) {
      Rational sum = 0;
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t omega : f.space().atoms(1)[a]) sum += q(k, omega) * lifted(k, omega);
      EXPECT_EQ(sum, 0);
    }
  }
}

TEST(GenCondExp, Errors) {
  const ModelFamily f = testkit::instance_a();
  const RobustPricingSystem q(RationalMatrix{{R(1, 2), R(1, 2)}, {R(0), R(0)}});
  EXPECT_THROW(gen_cond_expectation(f, q, testkit::max_stock_a(), 2), HorizonError);
  EXPECT_THROW(gen_cond_expectation(f, q, Claim(1, 2), 0), ShapeMismatch);
  EXPECT_THROW(atom_values(f.space(), testkit::max_stock_a(), 0), AdaptednessError);
}

TEST(GenMartingale, PriceAndGainsUnderVerifiedSystem) {
  const ModelFamily f = testkit::instance_a();
  const auto b = pricing_bounds(f, testkit::max_stock_a());
  EXPECT_FALSE(is_gen_martingale(f, b.hi_system, price_process(f)).has_value());
  const auto h = PredictableStrategy::constant(f.space(), 1, R(-7, 3));
  EXPECT_FALSE(is_gen_martingale(f, b.hi_system, gain_process(f, h)).has_value());
}

TEST(GenMartingale, DriftViolatesAtFirstStep) {
  const ModelFamily f = build_toy(testkit::two_period_params(R(0), R(1), R(0), R(2)));
  const auto q = find_pricing_system(f, 0);
  ASSERT_TRUE(q.has_value());
  const auto bad = is_gen_martingale(f, *q, drift(f, 1));
  ASSERT_TRUE(bad.has_value());
  EXPECT_EQ(bad->s, 0u);
  EXPECT_EQ(bad->t, 1u);
}

TEST(GenSupermartingale, SignOfDrift) {
  const ModelFamily f = build_toy(testkit::two_period_params(R(0), R(1), R(0), R(2)));
  const auto q = find_pricing_system(f, 1);
  ASSERT_TRUE(q.has_value());
  EXPECT_FALSE(is_gen_supermartingale(f, *q, drift(f, -1)).has_value());
  EXPECT_TRUE(is_gen_supermartingale(f, *q, drift(f, 1)).has_value());
  EXPECT_FALSE(is_gen_supermartingale(f, *q, price_process(f)).has_value());
}

TEST(GenMartingale, RejectsNonAdaptedProcess) {
  const ModelFamily f = testkit::instance_a();
  const RobustPricingSystem q(RationalMatrix{{R(1, 2), R(1, 2)}, {R(0), R(0)}});
  VectorProcess m = drift(f, 0);
  m[0](0, 0, 0) = 1;
  EXPECT_THROW(is_gen_martingale(f, q, m), AdaptednessError);
  EXPECT_THROW(is_gen_martingale(f, q, VectorProcess{m[0]}), ShapeMismatch);
}

TEST(DensityProcess, EndpointsAndProductForm) {
  const ToyParams p = testkit::two_period_params(R(1, 2), R(1), R(-1, 3), R(2));
  const ModelFamily f = build_toy(p);
  const RobustPricingSystem q = testkit::product_system(p);
  ASSERT_FALSE(verify_pricing_system(f, q).has_value());
  const DensityProcess z = density_process(f, q);
  const int signs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (std::size_t k = 0; k < 2; ++k) {
    const Rational r = p.models[k].mu[0] / p.models[k].sigma[0];
    for (std::size_t omega = 0; omega < 4; ++omega) {
      EXPECT_EQ(z(k, 2, omega), q.density(f.space(), k, omega));
      EXPECT_EQ(z(k, 1, omega), (1 - signs[omega][0] * r) / 2);
      EXPECT_EQ(z(k, 0, omega), q.mass(k));
    }
  }
}

TEST(DeflatedMartingale, VerifiedSystemsPassAndSkewedOnesFail) {
  const ModelFamily f = testkit::instance_a();
  for (std::size_t k = 0; k < 2; ++k) EXPECT_FALSE(check_deflated_martingale(f, *find_pricing_system(f, k)).has_value());
  const RobustPricingSystem skewed(RationalMatrix{{R(3, 4), R(1, 4)}, {R(0), R(0)}});
  EXPECT_TRUE(check_deflated_martingale(f, skewed).has_value());

  ToyParams one;
  one.models = {{"m", {R(1, 3)}, {R(1)}}};
  const auto emm = toy_emm(R(1, 3), R(1));
  const RobustPricingSystem classical(RationalMatrix{{emm.at(1), emm.at(-1)}});
  EXPECT_FALSE(check_deflated_martingale(build_toy(one), classical).has_value());
}

TEST(MartingaleProperty, LinearityTowerAndMass) {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (const auto& [f, q] : priced_families(410, 80)) {
    const std::size_t T = f.horizon();
    const Claim f1 = testkit::random_claim(rng, f);
    const Claim f2 = testkit::random_claim(rng, f);
    for (std::size_t s = 0; s < T; ++s) {
      const auto c1 = gen_cond_expectation(f, q, f1, s);
      const auto c2 = gen_cond_expectation(f, q, f2, s);
      const auto sum = gen_cond_expectation(f, q, f1 + f2, s);
      RationalMatrix member = add(c1.particular, c2.particular);
      for (const auto& b : c1.kernel_basis) member = add(member, b, Rational(testkit::uniform(rng, -3, 3)));
      EXPECT_TRUE(sum.contains(member));

      EXPECT_EQ(evaluate(q, c1.as_claim(f.space(), c1.particular)), evaluate(q, f1));

      // Through F_{s+1} first, starting from an arbitrary member.
      const auto mid = gen_cond_expectation(f, q, f1, s + 1);
      RationalMatrix g = mid.particular;
      for (const auto& b : mid.kernel_basis) g = add(g, b, Rational(testkit::uniform(rng, -2, 2)));
      const auto tower = gen_cond_expectation(f, q, mid.as_claim(f.space(), g), s);
      EXPECT_TRUE(c1.contains(tower.particular));
      ++checked;
    }
  }
  EXPECT_GT(checked, 40);
}

TEST(MartingaleProperty, StrategiesPreserveGeneralizedMartingales) {
  std::mt19937_64 rng(42);
  for (const auto& [f, q] : priced_families(420, 80)) {
    ASSERT_FALSE(is_gen_martingale(f, q, price_process(f)).has_value());
    EXPECT_FALSE(check_deflated_martingale(f, q).has_value());
    for (int i = 0; i < 3; ++i) {
      const auto h = testkit::random_strategy(rng, f, -9, 9);
      EXPECT_FALSE(is_gen_martingale(f, q, gain_process(f, h)).has_value());
      EXPECT_FALSE(is_gen_supermartingale(f, q, gain_process(f, h)).has_value());
    }
  }
}

TEST(MartingaleProperty, PerturbedSystemIsDetected) {
  std::mt19937_64 rng(43);
  int detected = 0;
  for (auto [f, q] : priced_families(430, 80)) {
    // Move mass between two outcomes of one model; keeps normalization.
    const std::size_t k = static_cast<std::size_t>(testkit::uniform(rng, 0, static_cast<long>(f.num_models()) - 1));
    if (f.num_outcomes() < 2) continue;
    RobustPricingSystem moved = q;
    const Rational delta(1, 1000);
    moved(k, 0) += delta;
    moved(k, f.num_outcomes() - 1) -= delta;
    const bool price_ok = !is_gen_martingale(f, moved, price_process(f)).has_value();
    const bool deflated_ok = !check_deflated_martingale(f, moved).has_value();
    EXPECT_EQ(price_ok, deflated_ok);
    if (!price_ok) {
      ++detected;
      EXPECT_TRUE(verify_pricing_system(f, moved).has_value());
    }
  }
  EXPECT_GT(detected, 10);
}
