#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rftap/market.hpp"
#include "rftap/pricing.hpp"

namespace rftap {

// Binary-tree market: Omega = {+,-}^T, outcomes named by their sign strings
// in lexicographic order with "+" first ("++", "+-", "-+", "--" for T = 2),
// F_t generated by the first t coordinates, and
//   S^theta_t = s0 + sum_{u <= t} (mu_u + sigma_u omega_u).
struct ToyModel {
  std::string name;
  RationalVector mu;     // mu_1..mu_T
  RationalVector sigma;  // sigma_1..sigma_T, all > 0
};

struct ToyParams {
  std::size_t horizon = 1;
  Rational s0 = 1;
  std::vector<ToyModel> models;
  // Outcome probabilities in outcome order; uniform when absent.
  std::optional<RationalVector> prob;
};

// The space alone. Throws ParamError for T = 0 or T > 16, ShapeMismatch for a
// probability vector of the wrong length and MeasureError for a bad P.
FilteredSpace toy_space(std::size_t horizon, const std::optional<RationalVector>& prob = std::nullopt);

// Throws ParamError (sigma <= 0, wrong lengths, no models).
ModelFamily build_toy(const ToyParams& params);

// Q(omega) = (1 - omega mu / sigma) / 2, keyed by omega = +1, -1. Throws
// DomainError unless |mu| < sigma.
std::map<int, Rational> toy_emm(const Rational& mu, const Rational& sigma);

struct FamilyPoint {
  Rational alpha;
  Rational beta;
};

// The eight two-sided bounds on (alpha, beta) for a one-period two-model toy.
// Throws ParamError when params is not such a toy.
bool family_region_check(const ToyParams& params, const FamilyPoint& point);

// Weights [[Q1(+1), Q1(-1)], [Q2(+1), Q2(-1)]] of the explicit two-parameter
// family. Throws RegionError outside the region and ParamError as above.
RobustPricingSystem explicit_family(const ToyParams& params, const FamilyPoint& point);

// One grid value of (mu_t, sigma_t).
using GridPoint = std::pair<Rational, Rational>;

struct LearningGrid {
  ModelFamily family;
  Integer total;  // number of predictable selections before truncation
  bool cap_exceeded = false;
};

// Theta = all predictable parameter processes with (mu_t, sigma_t) taken from
// grids[t-1] separately on each atom of F_{t-1}, in lexicographic order of
// the choice vector indexed by (t, atom), truncated to the first `cap`.
// Throws ParamError for empty grids, sigma <= 0, cap = 0 or a wrong grid count.
LearningGrid learning_grid(std::size_t horizon, const std::vector<std::vector<GridPoint>>& grids,
                           std::size_t cap, const Rational& s0 = Rational(1));

}  // namespace rftap
