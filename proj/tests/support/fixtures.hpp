#pragma once

#include "rftap/market.hpp"
#include "rftap/pricing.hpp"
#include "rftap/toy.hpp"

namespace rftap::testkit {

inline Rational R(long num, long den = 1) { return Rational(num, den); }

// T = 1, s0 = 1, mu = 0, sigma = (1, 2).
inline ToyParams instance_a_params() {
  ToyParams p;
  p.horizon = 1;
  p.models = {{"theta1", {R(0)}, {R(1)}}, {"theta2", {R(0)}, {R(2)}}};
  return p;
}
inline ModelFamily instance_a() { return build_toy(instance_a_params()); }

// T = 1, sigma = (1, 1), mu = (2, -2).
inline ToyParams instance_b_params() {
  ToyParams p;
  p.horizon = 1;
  p.models = {{"theta1", {R(2)}, {R(1)}}, {"theta2", {R(-2)}, {R(1)}}};
  return p;
}
inline ModelFamily instance_b() { return build_toy(instance_b_params()); }

// max_i S^i_1 on instance A: (1 + sigma2) on +, (1 - sigma1) on -.
inline Claim max_stock_a() { return Claim(RationalMatrix{{R(3), R(0)}, {R(3), R(0)}}); }

inline ToyParams two_period_params(const Rational& mu1, const Rational& s1, const Rational& mu2,
                                   const Rational& s2) {
  ToyParams p;
  p.horizon = 2;
  p.models = {{"theta1", {mu1, mu1}, {s1, s1}}, {"theta2", {mu2, mu2}, {s2, s2}}};
  return p;
}

// q^i(omega) = (1/8) prod_u (1 - omega_u mu_i / sigma_i): the two-block
// product system with total mass one.
inline RobustPricingSystem product_system(const ToyParams& p) {
  RationalMatrix w(p.models.size(), RationalVector(4));
  for (std::size_t k = 0; k < p.models.size(); ++k) {
    const Rational r = p.models[k].mu[0] / p.models[k].sigma[0];
    const int signs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    for (int o = 0; o < 4; ++o) w[k][o] = (1 - signs[o][0] * r) * (1 - signs[o][1] * r) / 8;
  }
  return RobustPricingSystem(std::move(w));
}

}  // namespace rftap::testkit
