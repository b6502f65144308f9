#include "rftap/market.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "rftap/errors.hpp"

namespace rftap {

FilteredSpace::FilteredSpace(std::vector<std::string> outcomes,
                             std::vector<std::vector<Atom>> partitions, RationalVector prob)
    : outcomes_(std::move(outcomes)), partitions_(std::move(partitions)), prob_(std::move(prob)) {
  const std::size_t n = outcomes_.size();
  if (n == 0) throw RefinementError("the sample space has no outcomes");
  if (partitions_.empty()) throw RefinementError("at least the partition at t = 0 is required");
  {
    std::set<std::string> names(outcomes_.begin(), outcomes_.end());
    if (names.size() != n) throw RefinementError("duplicate outcome names");
  }

  atom_index_.assign(partitions_.size(), std::vector<std::size_t>(n, n));
  for (std::size_t t = 0; t < partitions_.size(); ++t) {
    auto& atoms = partitions_[t];
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      auto& atom = atoms[a];
      if (atom.empty())
        throw RefinementError("partition at t = " + std::to_string(t) + " has an empty atom");
      std::sort(atom.begin(), atom.end());
      for (std::size_t omega : atom) {
        if (omega >= n)
          throw RefinementError("partition at t = " + std::to_string(t) + " names an unknown outcome");
        if (atom_index_[t][omega] != n)
          throw RefinementError("partition at t = " + std::to_string(t) + " lists outcome '" +
                                outcomes_[omega] + "' twice");
        atom_index_[t][omega] = a;
      }
    }
    for (std::size_t omega = 0; omega < n; ++omega)
      if (atom_index_[t][omega] == n)
        throw RefinementError("partition at t = " + std::to_string(t) + " does not cover outcome '" +
                              outcomes_[omega] + "'");
  }

  if (partitions_.front().size() != 1)
    throw RefinementError("partition at t = 0 must be the single root atom");
  for (std::size_t t = 0; t + 1 < partitions_.size(); ++t) {
    for (const auto& child : partitions_[t + 1]) {
      const std::size_t parent = atom_index_[t][child.front()];
      for (std::size_t omega : child)
        if (atom_index_[t][omega] != parent)
          throw RefinementError("partition at t = " + std::to_string(t + 1) +
                                " does not refine partition at t = " + std::to_string(t));
    }
  }
  for (const auto& atom : partitions_.back())
    if (atom.size() != 1)
      throw RefinementError("partition at the horizon must separate all outcomes");

  if (prob_.size() != n) throw MeasureError("probability vector does not match the outcomes");
  Rational total = 0;
  for (std::size_t omega = 0; omega < n; ++omega) {
    if (prob_[omega] <= 0)
      throw MeasureError("outcome '" + outcomes_[omega] + "' has non-positive probability " +
                         to_string(prob_[omega]));
    total += prob_[omega];
  }
  if (total != 1) throw MeasureError("probabilities sum to " + to_string(total) + ", not 1");
}

std::size_t FilteredSpace::outcome_index(std::string_view name) const {
  auto it = std::find(outcomes_.begin(), outcomes_.end(), name);
  if (it == outcomes_.end()) throw ParseError("unknown outcome '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - outcomes_.begin());
}

Rational FilteredSpace::prob_of_atom(std::size_t t, std::size_t atom) const {
  Rational p = 0;
  for (std::size_t omega : partitions_[t][atom]) p += prob_[omega];
  return p;
}

FilteredSpace build_space(std::size_t horizon,
                          const std::vector<std::vector<std::vector<std::string>>>& partitions,
                          const std::vector<std::pair<std::string, Rational>>& prob) {
  if (partitions.size() != horizon + 1)
    throw RefinementError("expected " + std::to_string(horizon + 1) + " partitions, got " +
                          std::to_string(partitions.size()));
  std::vector<std::string> outcomes;
  RationalVector weights;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& [name, p] : prob) {
    if (!index.emplace(name, outcomes.size()).second)
      throw MeasureError("outcome '" + name + "' has two probabilities");
    outcomes.push_back(name);
    weights.push_back(p);
  }
  std::vector<std::vector<Atom>> atoms(partitions.size());
  for (std::size_t t = 0; t < partitions.size(); ++t) {
    for (const auto& named : partitions[t]) {
      Atom atom;
      for (const auto& name : named) {
        auto it = index.find(name);
        if (it == index.end())
          throw RefinementError("partition at t = " + std::to_string(t) + " names unknown outcome '" +
                                name + "'");
        atom.push_back(it->second);
      }
      atoms[t].push_back(std::move(atom));
    }
  }
  return FilteredSpace(std::move(outcomes), std::move(atoms), std::move(weights));
}

AdaptedProcess::AdaptedProcess(std::size_t horizon, std::size_t num_outcomes, std::size_t dims)
    : horizon_(horizon),
      outcomes_(num_outcomes),
      dims_(dims),
      values_((horizon + 1) * num_outcomes * dims, Rational(0)) {}

std::optional<AdaptednessViolation> validate_adapted(const FilteredSpace& space,
                                                     const AdaptedProcess& process) {
  if (process.horizon() != space.horizon() || process.num_outcomes() != space.num_outcomes())
    throw ShapeMismatch("process shape does not match the space");
  for (std::size_t t = 0; t <= space.horizon(); ++t) {
    for (std::size_t a = 0; a < space.num_atoms(t); ++a) {
      const auto& atom = space.atoms(t)[a];
      for (std::size_t j = 0; j < process.dims(); ++j) {
        const Rational& first = process(t, atom.front(), j);
        for (std::size_t omega : atom) {
          if (process(t, omega, j) != first)
            return AdaptednessViolation{
                t, a, j,
                "value at t = " + std::to_string(t) + " is not constant on atom " +
                    std::to_string(a) + " (asset " + std::to_string(j) + "): outcome '" +
                    space.outcomes()[omega] + "' differs from '" + space.outcomes()[atom.front()] + "'"};
        }
      }
    }
  }
  return std::nullopt;
}

ModelFamily::ModelFamily(FilteredSpace space, std::vector<std::string> thetas,
                         std::vector<AdaptedProcess> processes)
    : space_(std::move(space)), thetas_(std::move(thetas)), processes_(std::move(processes)) {
  if (thetas_.empty()) throw ParamError("the model family is empty");
  if (thetas_.size() != processes_.size())
    throw ShapeMismatch("number of parameter names and processes differ");
  {
    std::set<std::string> names(thetas_.begin(), thetas_.end());
    if (names.size() != thetas_.size()) throw ParamError("duplicate parameter names");
  }
  const std::size_t d = processes_.front().dims();
  if (d == 0) throw ShapeMismatch("price processes need at least one asset");
  for (std::size_t k = 0; k < processes_.size(); ++k) {
    if (processes_[k].dims() != d)
      throw ShapeMismatch("model '" + thetas_[k] + "' has a different number of assets");
    if (processes_[k].horizon() != space_.horizon() ||
        processes_[k].num_outcomes() != space_.num_outcomes())
      throw ShapeMismatch("model '" + thetas_[k] + "' does not match the space");
    if (auto violation = validate_adapted(space_, processes_[k]))
      throw AdaptednessError("model '" + thetas_[k] + "': " + violation->message);
  }
}

std::size_t ModelFamily::theta_index(std::string_view name) const {
  auto it = std::find(thetas_.begin(), thetas_.end(), name);
  if (it == thetas_.end()) throw ThetaUnknown("unknown parameter '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - thetas_.begin());
}

ModelFamily ModelFamily::restrict_to(std::size_t k) const {
  if (k >= thetas_.size()) throw ThetaUnknown("parameter index out of range");
  return ModelFamily(space_, {thetas_[k]}, {processes_[k]});
}

// -- PredictableStrategy ---------------------------------------------------

PredictableStrategy PredictableStrategy::zero(const FilteredSpace& space, std::size_t dims) {
  return constant(space, dims, Rational(0));
}

PredictableStrategy PredictableStrategy::constant(const FilteredSpace& space, std::size_t dims,
                                                  const Rational& value) {
  PredictableStrategy h;
  h.dims_ = dims;
  for (std::size_t t = 1; t <= space.horizon(); ++t)
    h.per_time_.emplace_back(space.num_atoms(t - 1), RationalVector(dims, value));
  return h;
}

PredictableStrategy PredictableStrategy::from_outcomes(const FilteredSpace& space, std::size_t dims,
                                                       const std::vector<RationalMatrix>& positions) {
  if (positions.size() != space.horizon())
    throw ShapeMismatch("strategy needs one position vector per period");
  PredictableStrategy h = zero(space, dims);
  for (std::size_t t = 1; t <= space.horizon(); ++t) {
    const auto& per_outcome = positions[t - 1];
    if (per_outcome.size() != space.num_outcomes())
      throw ShapeMismatch("strategy positions do not cover every outcome");
    for (std::size_t a = 0; a < space.num_atoms(t - 1); ++a) {
      const auto& atom = space.atoms(t - 1)[a];
      for (std::size_t j = 0; j < dims; ++j) {
        if (per_outcome[atom.front()].size() != dims)
          throw ShapeMismatch("strategy position has the wrong dimension");
        const Rational& v = per_outcome[atom.front()][j];
        for (std::size_t omega : atom)
          if (per_outcome[omega].size() != dims || per_outcome[omega][j] != v)
            throw AdaptednessError("position at t = " + std::to_string(t) +
                                   " is not constant on an atom of F_" + std::to_string(t - 1));
        h.at_atom(t, a, j) = v;
      }
    }
  }
  return h;
}

PredictableStrategy PredictableStrategy::operator+(const PredictableStrategy& other) const {
  if (other.per_time_.size() != per_time_.size() || other.dims_ != dims_)
    throw ShapeMismatch("strategies have different shapes");
  PredictableStrategy out = *this;
  for (std::size_t t = 0; t < per_time_.size(); ++t)
    for (std::size_t a = 0; a < per_time_[t].size(); ++a)
      for (std::size_t j = 0; j < dims_; ++j) out.per_time_[t][a][j] += other.per_time_[t][a][j];
  return out;
}

PredictableStrategy PredictableStrategy::operator-() const { return scaled(Rational(-1)); }

PredictableStrategy PredictableStrategy::scaled(const Rational& factor) const {
  PredictableStrategy out = *this;
  for (auto& per_atom : out.per_time_)
    for (auto& v : per_atom)
      for (auto& x : v) x *= factor;
  return out;
}

// -- Claim ------------------------------------------------------------------

Claim::Claim(std::size_t num_models, std::size_t num_outcomes)
    : payoffs_(num_models, RationalVector(num_outcomes, Rational(0))) {}

Claim::Claim(RationalMatrix payoffs) : payoffs_(std::move(payoffs)) {
  for (const auto& row : payoffs_)
    if (row.size() != payoffs_.front().size()) throw ShapeMismatch("ragged claim payoffs");
}

Claim Claim::constant(const ModelFamily& family, const Rational& c) {
  Claim f(family.num_models(), family.num_outcomes());
  for (auto& row : f.payoffs_) std::fill(row.begin(), row.end(), c);
  return f;
}

Claim Claim::indicator(const ModelFamily& family, std::size_t k,
                       std::span<const std::size_t> outcomes) {
  Claim f(family.num_models(), family.num_outcomes());
  for (std::size_t omega : outcomes) f(k, omega) = 1;
  return f;
}

Claim Claim::price(const ModelFamily& family, std::size_t t, std::size_t j) {
  if (t > family.horizon()) throw HorizonError("time beyond the horizon");
  Claim f(family.num_models(), family.num_outcomes());
  for (std::size_t k = 0; k < family.num_models(); ++k)
    for (std::size_t omega = 0; omega < family.num_outcomes(); ++omega)
      f(k, omega) = family.price(k, t, omega, j);
  return f;
}

bool Claim::nonnegative() const {
  for (const auto& row : payoffs_)
    for (const auto& v : row)
      if (v < 0) return false;
  return true;
}

void Claim::check_shape(const ModelFamily& family) const {
  if (num_models() != family.num_models() || num_outcomes() != family.num_outcomes())
    throw ShapeMismatch("claim is " + std::to_string(num_models()) + "x" +
                        std::to_string(num_outcomes()) + ", family is " +
                        std::to_string(family.num_models()) + "x" +
                        std::to_string(family.num_outcomes()));
}

Claim Claim::operator+(const Claim& other) const {
  if (other.num_models() != num_models() || other.num_outcomes() != num_outcomes())
    throw ShapeMismatch("claims have different shapes");
  Claim out = *this;
  for (std::size_t k = 0; k < num_models(); ++k)
    for (std::size_t omega = 0; omega < num_outcomes(); ++omega) out(k, omega) += other(k, omega);
  return out;
}

Claim Claim::operator-(const Claim& other) const { return *this + (-other); }

Claim Claim::operator-() const { return scaled(Rational(-1)); }

Claim Claim::operator+(const Rational& c) const {
  Claim out = *this;
  for (auto& row : out.payoffs_)
    for (auto& v : row) v += c;
  return out;
}

Claim Claim::scaled(const Rational& factor) const {
  Claim out = *this;
  for (auto& row : out.payoffs_)
    for (auto& v : row) v *= factor;
  return out;
}

// -- gains --------------------------------------------------------------------

namespace {

void check_strategy(const ModelFamily& family, const PredictableStrategy& h) {
  if (h.horizon() != family.horizon() || h.dims() != family.dims())
    throw ShapeMismatch("strategy shape does not match the family");
  for (std::size_t t = 1; t <= family.horizon(); ++t)
    if (h.num_atoms(t) != family.space().num_atoms(t - 1))
      throw ShapeMismatch("strategy atoms do not match the filtration");
}

}  // namespace

RationalVector gain(const ModelFamily& family, const PredictableStrategy& strategy,
                    std::size_t k, std::size_t t) {
  if (t > family.horizon())
    throw HorizonError("t = " + std::to_string(t) + " exceeds the horizon " +
                       std::to_string(family.horizon()));
  if (k >= family.num_models()) throw ThetaUnknown("parameter index out of range");
  check_strategy(family, strategy);
  const auto& space = family.space();
  RationalVector out(family.num_outcomes(), Rational(0));
  for (std::size_t omega = 0; omega < family.num_outcomes(); ++omega)
    for (std::size_t s = 1; s <= t; ++s)
      for (std::size_t j = 0; j < family.dims(); ++j) {
        const Rational& h = strategy.at(space, s, omega, j);
        if (h != 0) out[omega] += h * family.increment(k, s, omega, j);
      }
  return out;
}

Claim terminal_gains(const ModelFamily& family, const PredictableStrategy& strategy) {
  RationalMatrix rows;
  for (std::size_t k = 0; k < family.num_models(); ++k)
    rows.push_back(gain(family, strategy, k, family.horizon()));
  return Claim(std::move(rows));
}

Claim semi_static_gains(const ModelFamily& family, const PredictableStrategy& strategy,
                        std::span<const StaticOption> options,
                        std::span<const Rational> static_positions) {
  if (options.size() != static_positions.size())
    throw ShapeMismatch("one static position per option is required");
  Claim total = terminal_gains(family, strategy);
  for (std::size_t i = 0; i < options.size(); ++i) {
    options[i].payoff.check_shape(family);
    total = total + options[i].translated().scaled(static_positions[i]);
  }
  return total;
}

std::size_t strategy_coordinates(const ModelFamily& family) {
  std::size_t n = 0;
  for (std::size_t t = 1; t <= family.horizon(); ++t) n += family.space().num_atoms(t - 1);
  return n * family.dims();
}

}  // namespace rftap
