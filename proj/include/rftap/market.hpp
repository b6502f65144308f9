#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rftap/rational.hpp"

namespace rftap {

// Outcome indices of one atom, ascending.
using Atom = std::vector<std::size_t>;

// Finite filtered probability space. Atoms of F_t are listed per time; F_0 is
// the single root atom, F_{t+1} refines F_t, F_T separates outcomes and P is
// strictly positive, so "P-a.s." means "for every outcome".
class FilteredSpace {
 public:
  // Validates every invariant. Throws RefinementError or MeasureError.
  FilteredSpace(std::vector<std::string> outcomes,
                std::vector<std::vector<Atom>> partitions,
                RationalVector prob);

  std::size_t horizon() const { return partitions_.size() - 1; }
  std::size_t num_outcomes() const { return outcomes_.size(); }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  // Throws ParseError for an unknown name.
  std::size_t outcome_index(std::string_view name) const;

  const std::vector<Atom>& atoms(std::size_t t) const { return partitions_.at(t); }
  std::size_t num_atoms(std::size_t t) const { return partitions_.at(t).size(); }
  std::size_t atom_of(std::size_t t, std::size_t omega) const { return atom_index_[t][omega]; }

  const RationalVector& prob() const { return prob_; }
  const Rational& prob(std::size_t omega) const { return prob_[omega]; }
  Rational prob_of_atom(std::size_t t, std::size_t atom) const;

 private:
  std::vector<std::string> outcomes_;
  std::vector<std::vector<Atom>> partitions_;
  std::vector<std::vector<std::size_t>> atom_index_;
  RationalVector prob_;
};

// Named construction: atoms are given as lists of outcome names and the
// outcome order is the order of `prob`.
FilteredSpace build_space(std::size_t horizon,
                          const std::vector<std::vector<std::vector<std::string>>>& partitions,
                          const std::vector<std::pair<std::string, Rational>>& prob);

// Values indexed by (t, outcome, asset) for t = 0..T.
class AdaptedProcess {
 public:
  AdaptedProcess() = default;
  AdaptedProcess(std::size_t horizon, std::size_t num_outcomes, std::size_t dims);

  std::size_t horizon() const { return horizon_; }
  std::size_t num_outcomes() const { return outcomes_; }
  std::size_t dims() const { return dims_; }

  const Rational& operator()(std::size_t t, std::size_t omega, std::size_t j) const {
    return values_[(t * outcomes_ + omega) * dims_ + j];
  }
  Rational& operator()(std::size_t t, std::size_t omega, std::size_t j) {
    return values_[(t * outcomes_ + omega) * dims_ + j];
  }
  bool operator==(const AdaptedProcess&) const = default;

 private:
  std::size_t horizon_ = 0;
  std::size_t outcomes_ = 0;
  std::size_t dims_ = 0;
  RationalVector values_;
};

struct AdaptednessViolation {
  std::size_t t;
  std::size_t atom;
  std::size_t asset;
  std::string message;
};

// nullopt when every value is constant on the atoms of its time.
std::optional<AdaptednessViolation> validate_adapted(const FilteredSpace& space,
                                                     const AdaptedProcess& process);

// A finite family of d-dimensional price processes on one space.
class ModelFamily {
 public:
  // Throws ShapeMismatch, AdaptednessError or ParamError (empty family,
  // duplicate names).
  ModelFamily(FilteredSpace space, std::vector<std::string> thetas,
              std::vector<AdaptedProcess> processes);

  const FilteredSpace& space() const { return space_; }
  std::size_t horizon() const { return space_.horizon(); }
  std::size_t num_outcomes() const { return space_.num_outcomes(); }
  std::size_t num_models() const { return thetas_.size(); }
  std::size_t dims() const { return processes_.front().dims(); }

  const std::vector<std::string>& thetas() const { return thetas_; }
  // Throws ThetaUnknown.
  std::size_t theta_index(std::string_view name) const;
  const AdaptedProcess& process(std::size_t k) const { return processes_[k]; }

  const Rational& price(std::size_t k, std::size_t t, std::size_t omega, std::size_t j) const {
    return processes_[k](t, omega, j);
  }
  Rational increment(std::size_t k, std::size_t t, std::size_t omega, std::size_t j) const {
    return processes_[k](t, omega, j) - processes_[k](t - 1, omega, j);
  }

  // The one-model family {theta_k}.
  ModelFamily restrict_to(std::size_t k) const;

 private:
  FilteredSpace space_;
  std::vector<std::string> thetas_;
  std::vector<AdaptedProcess> processes_;
};

// Positions H_t for t = 1..T, stored per atom of F_{t-1}, so predictability
// holds by construction.
class PredictableStrategy {
 public:
  PredictableStrategy() = default;
  static PredictableStrategy zero(const FilteredSpace& space, std::size_t dims);
  static PredictableStrategy constant(const FilteredSpace& space, std::size_t dims,
                                      const Rational& value);
  // positions[t-1][omega][j]. Throws AdaptednessError if some H_t is not
  // constant on an atom of F_{t-1}.
  static PredictableStrategy from_outcomes(const FilteredSpace& space, std::size_t dims,
                                           const std::vector<RationalMatrix>& positions);

  std::size_t horizon() const { return per_time_.size(); }
  std::size_t dims() const { return dims_; }
  std::size_t num_atoms(std::size_t t) const { return per_time_[t - 1].size(); }

  // Position at time t (1-based) on atom `atom` of F_{t-1}.
  const Rational& at_atom(std::size_t t, std::size_t atom, std::size_t j) const {
    return per_time_[t - 1][atom][j];
  }
  Rational& at_atom(std::size_t t, std::size_t atom, std::size_t j) {
    return per_time_[t - 1][atom][j];
  }
  const Rational& at(const FilteredSpace& space, std::size_t t, std::size_t omega,
                     std::size_t j) const {
    return at_atom(t, space.atom_of(t - 1, omega), j);
  }

  PredictableStrategy operator+(const PredictableStrategy& other) const;
  PredictableStrategy operator-() const;
  PredictableStrategy scaled(const Rational& factor) const;
  bool operator==(const PredictableStrategy&) const = default;

 private:
  std::size_t dims_ = 0;
  // [t-1][atom][asset]
  std::vector<RationalMatrix> per_time_;
};

// A vector claim f = (f^theta), one F_T-measurable payoff per model.
class Claim {
 public:
  Claim() = default;
  Claim(std::size_t num_models, std::size_t num_outcomes);
  explicit Claim(RationalMatrix payoffs);

  static Claim constant(const ModelFamily& family, const Rational& c);
  // 1^theta_A: one in model k on the given outcomes, zero elsewhere.
  static Claim indicator(const ModelFamily& family, std::size_t k, std::span<const std::size_t> outcomes);
  // S^{theta,j}_t for every model.
  static Claim price(const ModelFamily& family, std::size_t t, std::size_t j = 0);

  std::size_t num_models() const { return payoffs_.size(); }
  std::size_t num_outcomes() const { return payoffs_.empty() ? 0 : payoffs_.front().size(); }
  const Rational& operator()(std::size_t k, std::size_t omega) const { return payoffs_[k][omega]; }
  Rational& operator()(std::size_t k, std::size_t omega) { return payoffs_[k][omega]; }
  const RationalMatrix& payoffs() const { return payoffs_; }

  bool nonnegative() const;
  // Throws ShapeMismatch unless the claim matches the family's Theta x Omega.
  void check_shape(const ModelFamily& family) const;

  Claim operator+(const Claim& other) const;
  Claim operator-(const Claim& other) const;
  Claim operator-() const;
  Claim operator+(const Rational& c) const;
  Claim operator-(const Rational& c) const { return *this + Rational(-c); }
  Claim scaled(const Rational& factor) const;
  bool operator==(const Claim&) const = default;

 private:
  RationalMatrix payoffs_;  // [theta][omega]
};

// An option tradeable only at t = 0 at `quote`.
struct StaticOption {
  std::string name;
  Claim payoff;
  Rational quote;

  // g - g_0 * 1: the payoff after moving the quote to zero.
  Claim translated() const { return payoff - quote; }
};

// (H . S^theta)_t(omega) for every outcome. Throws HorizonError (t > T) or
// ShapeMismatch.
RationalVector gain(const ModelFamily& family, const PredictableStrategy& strategy,
                    std::size_t k, std::size_t t);

// Terminal gains of H in every model as a claim.
Claim terminal_gains(const ModelFamily& family, const PredictableStrategy& strategy);

// Gains of a semi-static position: H . S_T + sum_i a_i g^i (translated payoffs).
Claim semi_static_gains(const ModelFamily& family, const PredictableStrategy& strategy,
                        std::span<const StaticOption> options, std::span<const Rational> static_positions);

// Number of strategy coordinates: d * sum_t |atoms(F_{t-1})|. Coordinate order
// is (t, atom, asset), the order used by every LP in the library.
std::size_t strategy_coordinates(const ModelFamily& family);

}  // namespace rftap
