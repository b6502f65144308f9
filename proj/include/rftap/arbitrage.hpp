#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rftap/market.hpp"
#include "rftap/parallel.hpp"
#include "rftap/pricing.hpp"

namespace rftap {

// Result of the slack LP
//   max sum s  s.t.  (H . S^theta_T)(omega) + sum_i a_i g^i >= s, 0 <= s <= 1.
// A positive optimum means the vertex maximizer (H, a) is a robust arbitrage.
struct ArbitrageSearch {
  bool found = false;
  Rational optimum;
  PredictableStrategy strategy;
  RationalVector static_positions;
};

ArbitrageSearch find_robust_arbitrage(const ModelFamily& family,
                                      std::span<const StaticOption> options = {});

struct NraVerdict {
  bool holds = false;
  // A robust arbitrage when holds is false.
  std::optional<PredictableStrategy> witness;
  RationalVector witness_static;
  // One member of Q^theta per model when holds is true.
  std::vector<RobustPricingSystem> certificates;
};

// Decides NRA (with static options when given). When it holds, certificates
// are searched per model, concurrently under Execution::Parallel.
NraVerdict check_nra(const ModelFamily& family, std::span<const StaticOption> options = {},
                     parallel::Execution exec = parallel::default_execution());

// Gains are >= 0 in every (theta, omega) and > 0 in at least one.
bool is_robust_arbitrage(const ModelFamily& family, const PredictableStrategy& strategy,
                         std::span<const StaticOption> options = {},
                         std::span<const Rational> static_positions = {});

struct ClassicalVerdict {
  bool holds = false;
  // Equivalent martingale measure for S^theta, indexed by outcome.
  std::optional<RationalVector> martingale_measure;
  std::optional<PredictableStrategy> witness;
};

// NA for the single model k: max eps s.t. Q(omega) >= eps, sum Q = 1 and the
// per-atom martingale rows. Holds iff the optimum is positive; otherwise the
// one-model slack LP supplies an arbitrage. Throws ThetaUnknown.
ClassicalVerdict check_classical_na(const ModelFamily& family, std::size_t k);

}  // namespace rftap
