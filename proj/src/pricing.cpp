#include "rftap/pricing.hpp"

#include "rftap/arbitrage.hpp"
#include "rftap/errors.hpp"

namespace rftap {

Rational RobustPricingSystem::mass(std::size_t k) const {
  Rational total = 0;
  for (const auto& q : weights_[k]) total += q;
  return total;
}

PricingConstraintSet::PricingConstraintSet(const ModelFamily& family,
                                           std::span<const StaticOption> options)
    : num_models_(family.num_models()), num_outcomes_(family.num_outcomes()) {
  const auto& space = family.space();
  const std::size_t n = num_outcomes_;

  Row normalization{"normalization", {}, Rational(1)};
  for (std::size_t i = 0; i < num_weights(); ++i) normalization.coefficients.emplace_back(i, Rational(1));
  rows_.push_back(std::move(normalization));

  // sum_{theta, omega in A} q (S_t - S_{t-1}) = 0 for A an atom of F_{t-1}.
  for (std::size_t t = 1; t <= family.horizon(); ++t)
    for (std::size_t a = 0; a < space.num_atoms(t - 1); ++a)
      for (std::size_t j = 0; j < family.dims(); ++j) {
        Row row{"martingale t=" + std::to_string(t) + " atom=" + std::to_string(a) +
                    " asset=" + std::to_string(j),
                {},
                Rational(0)};
        for (std::size_t k = 0; k < num_models_; ++k)
          for (std::size_t omega : space.atoms(t - 1)[a]) {
            Rational inc = family.increment(k, t, omega, j);
            if (inc != 0) row.coefficients.emplace_back(k * n + omega, std::move(inc));
          }
        rows_.push_back(std::move(row));
      }

  for (const auto& option : options) {
    option.payoff.check_shape(family);
    const Claim g = option.translated();
    Row row{"calibration " + option.name, {}, Rational(0)};
    for (std::size_t k = 0; k < num_models_; ++k)
      for (std::size_t omega = 0; omega < n; ++omega)
        if (g(k, omega) != 0) row.coefficients.emplace_back(k * n + omega, g(k, omega));
    rows_.push_back(std::move(row));
  }
}

std::size_t PricingConstraintSet::add_to(lp::LinearProgram& program) const {
  const std::size_t first = program.num_variables();
  for (std::size_t k = 0; k < num_models_; ++k)
    for (std::size_t omega = 0; omega < num_outcomes_; ++omega)
      program.add_variable("q[" + std::to_string(k) + "," + std::to_string(omega) + "]");
  for (const auto& row : rows_) {
    std::vector<lp::Term> terms;
    for (const auto& [i, c] : row.coefficients) terms.push_back({first + i, c});
    program.add_constraint(std::move(terms), lp::Relation::Equal, row.rhs, row.name);
  }
  return first;
}

RobustPricingSystem PricingConstraintSet::extract(const RationalVector& x, std::size_t first) const {
  RationalMatrix w(num_models_, RationalVector(num_outcomes_));
  for (std::size_t k = 0; k < num_models_; ++k)
    for (std::size_t omega = 0; omega < num_outcomes_; ++omega)
      w[k][omega] = x[first + weight_index(k, omega)];
  return RobustPricingSystem(std::move(w));
}

Rational evaluate(const RobustPricingSystem& system, const Claim& claim) {
  if (system.num_models() != claim.num_models() || system.num_outcomes() != claim.num_outcomes())
    throw ShapeMismatch("pricing system and claim have different shapes");
  Rational total = 0;
  for (std::size_t k = 0; k < system.num_models(); ++k)
    for (std::size_t omega = 0; omega < system.num_outcomes(); ++omega)
      if (system(k, omega) != 0) total += system(k, omega) * claim(k, omega);
  return total;
}

std::optional<RobustPricingSystem> find_pricing_system(const ModelFamily& family, std::size_t k,
                                                       std::span<const StaticOption> options) {
  if (k >= family.num_models()) throw ThetaUnknown("parameter index out of range");
  PricingConstraintSet constraints(family, options);
  lp::LinearProgram program;
  const std::size_t first = constraints.add_to(program);
  std::vector<lp::Term> objective;
  for (std::size_t omega = 0; omega < family.num_outcomes(); ++omega)
    objective.push_back({first + constraints.weight_index(k, omega), Rational(1)});
  program.set_objective(lp::Sense::Maximize, std::move(objective));

  const auto solution = lp::solve(program, parallel::Execution::Serial);
  if (solution.status != lp::Status::Optimal || solution.value <= 0) return std::nullopt;
  return constraints.extract(solution.assignment, first);
}

std::optional<PricingViolation> verify_pricing_system(const ModelFamily& family,
                                                      const RobustPricingSystem& system,
                                                      std::span<const StaticOption> options) {
  if (system.num_models() != family.num_models() || system.num_outcomes() != family.num_outcomes())
    return PricingViolation{"shape", "system does not match the family's Theta x Omega"};
  for (std::size_t k = 0; k < system.num_models(); ++k)
    for (std::size_t omega = 0; omega < system.num_outcomes(); ++omega)
      if (system(k, omega) < 0)
        return PricingViolation{"nonnegativity", "weight at (" + family.thetas()[k] + ", " +
                                                     family.space().outcomes()[omega] +
                                                     ") is negative"};

  PricingConstraintSet constraints(family, options);
  for (const auto& row : constraints.rows()) {
    Rational lhs = 0;
    for (const auto& [i, c] : row.coefficients)
      lhs += c * system(i / family.num_outcomes(), i % family.num_outcomes());
    if (lhs != row.rhs)
      return PricingViolation{row.name, "row evaluates to " + to_string(lhs) + ", expected " +
                                            to_string(row.rhs)};
  }
  return std::nullopt;
}

PriceBounds pricing_bounds(const ModelFamily& family, const Claim& claim,
                           std::span<const StaticOption> options, parallel::Execution exec) {
  claim.check_shape(family);
  PricingConstraintSet constraints(family, options);

  std::array<lp::LpSolution, 2> solutions;
  std::array<std::size_t, 2> firsts{};
  parallel::for_each_index(
      2,
      [&](std::size_t side) {
        lp::LinearProgram program;
        firsts[side] = constraints.add_to(program);
        std::vector<lp::Term> objective;
        for (std::size_t k = 0; k < family.num_models(); ++k)
          for (std::size_t omega = 0; omega < family.num_outcomes(); ++omega)
            objective.push_back({firsts[side] + constraints.weight_index(k, omega), claim(k, omega)});
        program.set_objective(side == 0 ? lp::Sense::Minimize : lp::Sense::Maximize,
                              std::move(objective));
        solutions[side] = lp::solve(program, parallel::Execution::Serial);
      },
      exec);

  if (solutions[1].status == lp::Status::Infeasible)
    throw NoPricingSystem("the set of robust pricing systems is empty");
  if (find_robust_arbitrage(family, options).found)
    throw NraViolated("NRA fails: robust pricing systems exist but not for every model");

  PriceBounds bounds;
  bounds.lo = solutions[0].value;
  bounds.hi = solutions[1].value;
  bounds.lo_system = constraints.extract(solutions[0].assignment, firsts[0]);
  bounds.hi_system = constraints.extract(solutions[1].assignment, firsts[1]);
  return bounds;
}

}  // namespace rftap
