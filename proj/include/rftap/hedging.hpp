#pragma once

#include <optional>
#include <span>
#include <string>

#include "rftap/market.hpp"
#include "rftap/parallel.hpp"

namespace rftap {

struct HedgeResult {
  Rational price;
  PredictableStrategy strategy;
  // Static option positions a_i, empty without options.
  RationalVector static_positions;
  // price + H.S_T + sum a_i g^i - f per (theta, omega). Nonnegative for a
  // superhedge, nonpositive for a subhedge.
  Claim residuals;
};

// Least x with x + H.S_T + sum a_i g^i >= f for all (theta, omega), and the
// vertex strategy attaining it. Throws NraViolated (NRA with the options
// fails) or UnboundedBelow.
HedgeResult superhedge(const ModelFamily& family, const Claim& claim,
                       std::span<const StaticOption> options = {});

// -superhedge(-f), with the strategy negated.
HedgeResult subhedge(const ModelFamily& family, const Claim& claim,
                     std::span<const StaticOption> options = {});

// Superhedge of f^theta_k in the one-model family {theta_k}. No NRA
// precondition; throws UnboundedBelow when the price is -infinity.
HedgeResult per_model_superhedge(const ModelFamily& family, const Claim& claim, std::size_t k);

// max_k per_model_superhedge(f, k).price over the models with a finite
// price: the worst-case price, a lower bound for the robust one. Throws
// UnboundedBelow when no model has a finite price.
Rational worst_case_price(const ModelFamily& family, const Claim& claim);

struct Replication {
  Rational cost;
  PredictableStrategy strategy;
};

// Exact solution of x + (H.S^theta_T)(omega) = f^theta(omega) for all
// (theta, omega), or nullopt.
std::optional<Replication> replicable(const ModelFamily& family, const Claim& claim);

struct CompletenessReport {
  bool complete = false;
  std::optional<Claim> witness;   // a non-replicable claim 1^theta_A
  std::string witness_label;      // e.g. "1^{theta1}_Omega"
};

// Tests 1^theta_Omega and 1^theta_{omega} for every theta and outcome, in
// that order; the first non-replicable one is the witness. Throws NraViolated.
CompletenessReport market_complete(const ModelFamily& family,
                                   parallel::Execution exec = parallel::default_execution());

// Backward recursion: V_T = f; V_{t-1}(A) is the one-period robust
// superhedging price of V_t over the children of A across all models.
// Always >= superhedge(f).price. Throws NraViolated.
Rational dp_superhedge(const ModelFamily& family, const Claim& claim,
                       parallel::Execution exec = parallel::default_execution());

}  // namespace rftap
