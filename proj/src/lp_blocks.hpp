#pragma once

// LP building blocks shared by the arbitrage, pricing and hedging modules.

#include <span>
#include <string>
#include <vector>

#include "rftap/lp.hpp"
#include "rftap/market.hpp"

namespace rftap::detail {

// Free variables H[t][atom of F_{t-1}][asset], in (t, atom, asset) order.
class StrategyBlock {
 public:
  StrategyBlock(lp::LinearProgram& program, const ModelFamily& family, const std::string& prefix = "H") {
    dims_ = family.dims();
    first_ = program.num_variables();
    std::size_t offset = 0;
    for (std::size_t t = 1; t <= family.horizon(); ++t) {
      offsets_.push_back(offset);
      for (std::size_t a = 0; a < family.space().num_atoms(t - 1); ++a)
        for (std::size_t j = 0; j < dims_; ++j)
          program.add_variable(prefix + "[" + std::to_string(t) + "," + std::to_string(a) + "," +
                                   std::to_string(j) + "]",
                               lp::Bounds::free());
      offset += family.space().num_atoms(t - 1) * dims_;
    }
    count_ = offset;
  }

  std::size_t var(std::size_t t, std::size_t atom, std::size_t j) const {
    return first_ + offsets_[t - 1] + atom * dims_ + j;
  }
  std::size_t first() const { return first_; }
  std::size_t count() const { return count_; }

  // Terms of scale * (H . S^theta_k)_T(omega).
  void append_gain(const ModelFamily& family, std::size_t k, std::size_t omega,
                   std::vector<lp::Term>& terms, const Rational& scale = Rational(1)) const {
    for (std::size_t t = 1; t <= family.horizon(); ++t) {
      const std::size_t atom = family.space().atom_of(t - 1, omega);
      for (std::size_t j = 0; j < dims_; ++j) {
        Rational inc = family.increment(k, t, omega, j);
        if (inc != 0) terms.push_back({var(t, atom, j), scale * inc});
      }
    }
  }

  PredictableStrategy extract(const ModelFamily& family, const RationalVector& x) const {
    auto h = PredictableStrategy::zero(family.space(), dims_);
    for (std::size_t t = 1; t <= family.horizon(); ++t)
      for (std::size_t a = 0; a < family.space().num_atoms(t - 1); ++a)
        for (std::size_t j = 0; j < dims_; ++j) h.at_atom(t, a, j) = x[var(t, a, j)];
    return h;
  }

 private:
  std::size_t first_ = 0;
  std::size_t count_ = 0;
  std::size_t dims_ = 0;
  std::vector<std::size_t> offsets_;
};

// Free static positions a_i in quote-translated options.
class StaticBlock {
 public:
  StaticBlock(lp::LinearProgram& program, const ModelFamily& family,
              std::span<const StaticOption> options)
      : options_(options) {
    first_ = program.num_variables();
    for (const auto& option : options) {
      option.payoff.check_shape(family);
      translated_.push_back(option.translated());
      program.add_variable("a[" + option.name + "]", lp::Bounds::free());
    }
  }

  void append_payoff(std::size_t k, std::size_t omega, std::vector<lp::Term>& terms,
                     const Rational& scale = Rational(1)) const {
    for (std::size_t i = 0; i < translated_.size(); ++i) {
      const Rational& g = translated_[i](k, omega);
      if (g != 0) terms.push_back({first_ + i, scale * g});
    }
  }

  RationalVector extract(const RationalVector& x) const {
    return RationalVector(x.begin() + static_cast<std::ptrdiff_t>(first_),
                          x.begin() + static_cast<std::ptrdiff_t>(first_ + translated_.size()));
  }

 private:
  std::span<const StaticOption> options_;
  std::vector<Claim> translated_;
  std::size_t first_ = 0;
};

}  // namespace rftap::detail
