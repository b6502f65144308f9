#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rftap/lp.hpp"
#include "rftap/market.hpp"

namespace rftap {

// Weights q[theta][omega] >= 0 of a robust pricing system. The density is
// Z^theta_T(omega) = q[theta][omega] / P(omega).
class RobustPricingSystem {
 public:
  RobustPricingSystem() = default;
  explicit RobustPricingSystem(RationalMatrix weights) : weights_(std::move(weights)) {}

  std::size_t num_models() const { return weights_.size(); }
  std::size_t num_outcomes() const { return weights_.empty() ? 0 : weights_.front().size(); }
  const Rational& operator()(std::size_t k, std::size_t omega) const { return weights_[k][omega]; }
  Rational& operator()(std::size_t k, std::size_t omega) { return weights_[k][omega]; }
  const RationalMatrix& weights() const { return weights_; }

  // Total weight on model k.
  Rational mass(std::size_t k) const;
  Rational density(const FilteredSpace& space, std::size_t k, std::size_t omega) const {
    return weights_[k][omega] / space.prob(omega);
  }
  bool operator==(const RobustPricingSystem&) const = default;

 private:
  RationalMatrix weights_;
};

// The equality rows that cut the pricing polytope out of the nonnegative
// orthant: normalization, one generalized-martingale row per
// (t, atom of F_{t-1}, asset), and one calibration row per option.
// Weight index of (theta_k, omega) is k * |Omega| + omega.
class PricingConstraintSet {
 public:
  struct Row {
    std::string name;
    std::vector<std::pair<std::size_t, Rational>> coefficients;
    Rational rhs;
  };

  PricingConstraintSet(const ModelFamily& family, std::span<const StaticOption> options = {});

  const std::vector<Row>& rows() const { return rows_; }
  std::size_t num_weights() const { return num_models_ * num_outcomes_; }
  std::size_t weight_index(std::size_t k, std::size_t omega) const { return k * num_outcomes_ + omega; }

  // Adds nonnegative weight variables and the equality rows; returns the
  // index of the first weight variable.
  std::size_t add_to(lp::LinearProgram& program) const;
  RobustPricingSystem extract(const RationalVector& x, std::size_t first) const;

 private:
  std::size_t num_models_;
  std::size_t num_outcomes_;
  std::vector<Row> rows_;
};

// Q(f) = sum_{theta, omega} q f. Throws ShapeMismatch.
Rational evaluate(const RobustPricingSystem& system, const Claim& claim);

// A member of Q^theta_k (calibrated to the options when given): the vertex
// maximizing the mass on model k. nullopt when that mass is zero.
// Options must carry their quotes; translation happens here.
std::optional<RobustPricingSystem> find_pricing_system(const ModelFamily& family, std::size_t k,
                                                       std::span<const StaticOption> options = {});

struct PricingViolation {
  std::string row;
  std::string message;
};

// Checks nonnegativity and every row of PricingConstraintSet exactly.
std::optional<PricingViolation> verify_pricing_system(const ModelFamily& family,
                                                      const RobustPricingSystem& system,
                                                      std::span<const StaticOption> options = {});

struct PriceBounds {
  Rational lo;
  Rational hi;
  RobustPricingSystem lo_system;  // minimizer
  RobustPricingSystem hi_system;  // maximizer
};

// Min and max of Q(f) over all (calibrated) robust pricing systems.
// Throws NoPricingSystem when the polytope is empty and NraViolated when it
// is not but NRA fails.
PriceBounds pricing_bounds(const ModelFamily& family, const Claim& claim,
                           std::span<const StaticOption> options = {},
                           parallel::Execution exec = parallel::default_execution());

}  // namespace rftap
