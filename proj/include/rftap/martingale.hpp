#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rftap/market.hpp"
#include "rftap/pricing.hpp"

namespace rftap {

// M = (M^theta): one adapted process per model, all of equal dimension.
using VectorProcess = std::vector<AdaptedProcess>;

// S = (S^theta).
VectorProcess price_process(const ModelFamily& family);

// (H . S^theta)_t as a one-dimensional vector process.
VectorProcess gain_process(const ModelFamily& family, const PredictableStrategy& strategy);

// The solution set of Q(f 1_A) = Q(g 1_A) for every atom A of F_s, with g
// F_s-measurable: particular + span(kernel_basis). Values are indexed
// [theta][atom of F_s].
struct GeneralizedCondExp {
  std::size_t time = 0;
  RationalMatrix particular;
  std::vector<RationalMatrix> kernel_basis;

  // candidate - particular lies in span(kernel_basis).
  bool contains(const RationalMatrix& candidate) const;
  // Lifts atom values to a claim on (theta, omega).
  Claim as_claim(const FilteredSpace& space, const RationalMatrix& values) const;
};

// Throws HorizonError for s > T and ShapeMismatch.
GeneralizedCondExp gen_cond_expectation(const ModelFamily& family, const RobustPricingSystem& system,
                                        const Claim& claim, std::size_t s);

// Restricts an F_s-measurable claim to its atom values [theta][atom]. Throws
// AdaptednessError when the claim is not F_s-measurable.
RationalMatrix atom_values(const FilteredSpace& space, const Claim& claim, std::size_t s);

struct MartingaleViolation {
  std::size_t s;
  std::size_t t;
  std::size_t atom;
  std::size_t asset;
  std::string message;
};

// Q(M_t 1_A) == Q(M_s 1_A) for all s < t and atoms A of F_s.
std::optional<MartingaleViolation> is_gen_martingale(const ModelFamily& family,
                                                     const RobustPricingSystem& system,
                                                     const VectorProcess& process);

// Q(M_t 1_A) <= Q(M_s 1_A) for all s < t and atoms A of F_s.
std::optional<MartingaleViolation> is_gen_supermartingale(const ModelFamily& family,
                                                          const RobustPricingSystem& system,
                                                          const VectorProcess& process);

// Z^theta_t = E_P[Z^theta_T | F_t] with Z^theta_T = q / P.
class DensityProcess {
 public:
  DensityProcess(std::size_t num_models, std::size_t horizon, std::size_t num_outcomes)
      : outcomes_(num_outcomes),
        horizon_(horizon),
        values_(num_models * (horizon + 1) * num_outcomes, Rational(0)) {}

  const Rational& operator()(std::size_t k, std::size_t t, std::size_t omega) const {
    return values_[(k * (horizon_ + 1) + t) * outcomes_ + omega];
  }
  Rational& operator()(std::size_t k, std::size_t t, std::size_t omega) {
    return values_[(k * (horizon_ + 1) + t) * outcomes_ + omega];
  }

 private:
  std::size_t outcomes_;
  std::size_t horizon_;
  RationalVector values_;
};

DensityProcess density_process(const ModelFamily& family, const RobustPricingSystem& system);

// E_P[(sum_theta Z_t S_t - sum_theta Z_s S_s) 1_A] == 0 for all s < t and
// atoms A of F_s, per asset.
std::optional<MartingaleViolation> check_deflated_martingale(const ModelFamily& family,
                                                             const RobustPricingSystem& system);

}  // namespace rftap
