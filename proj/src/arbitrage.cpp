#include "rftap/arbitrage.hpp"

#include <stdexcept>

#include "lp_blocks.hpp"
#include "rftap/errors.hpp"

namespace rftap {

ArbitrageSearch find_robust_arbitrage(const ModelFamily& family,
                                      std::span<const StaticOption> options) {
  lp::LinearProgram program;
  detail::StrategyBlock h(program, family);
  detail::StaticBlock a(program, family, options);

  std::vector<lp::Term> objective;
  for (std::size_t k = 0; k < family.num_models(); ++k)
    for (std::size_t omega = 0; omega < family.num_outcomes(); ++omega) {
      const std::size_t s = program.add_variable(
          "s[" + family.thetas()[k] + "," + family.space().outcomes()[omega] + "]",
          lp::Bounds::boxed(Rational(0), Rational(1)));
      std::vector<lp::Term> row;
      h.append_gain(family, k, omega, row);
      a.append_payoff(k, omega, row);
      row.push_back({s, Rational(-1)});
      program.add_constraint(std::move(row), lp::Relation::GreaterEqual, Rational(0));
      objective.push_back({s, Rational(1)});
    }
  program.set_objective(lp::Sense::Maximize, std::move(objective));

  const auto solution = lp::solve(program, parallel::Execution::Serial);
  // H = 0, s = 0 is always feasible and s <= 1 bounds the objective.
  if (solution.status != lp::Status::Optimal)
    throw std::logic_error("robust arbitrage LP is not optimal");

  ArbitrageSearch out;
  out.optimum = solution.value;
  out.found = solution.value > 0;
  out.strategy = h.extract(family, solution.assignment);
  out.static_positions = a.extract(solution.assignment);
  return out;
}

NraVerdict check_nra(const ModelFamily& family, std::span<const StaticOption> options,
                     parallel::Execution exec) {
  NraVerdict verdict;
  auto search = find_robust_arbitrage(family, options);
  if (search.found) {
    verdict.holds = false;
    verdict.witness = std::move(search.strategy);
    verdict.witness_static = std::move(search.static_positions);
    return verdict;
  }

  verdict.holds = true;
  std::vector<std::optional<RobustPricingSystem>> found(family.num_models());
  parallel::for_each_index(
      family.num_models(),
      [&](std::size_t k) { found[k] = find_pricing_system(family, k, options); }, exec);
  for (std::size_t k = 0; k < found.size(); ++k) {
    if (!found[k])
      throw std::logic_error("NRA holds but no pricing system charges model '" + family.thetas()[k] +
                             "'");
    verdict.certificates.push_back(std::move(*found[k]));
  }
  return verdict;
}

bool is_robust_arbitrage(const ModelFamily& family, const PredictableStrategy& strategy,
                         std::span<const StaticOption> options,
                         std::span<const Rational> static_positions) {
  const Claim gains = semi_static_gains(family, strategy, options, static_positions);
  bool positive = false;
  for (std::size_t k = 0; k < gains.num_models(); ++k)
    for (std::size_t omega = 0; omega < gains.num_outcomes(); ++omega) {
      if (gains(k, omega) < 0) return false;
      if (gains(k, omega) > 0) positive = true;
    }
  return positive;
}

ClassicalVerdict check_classical_na(const ModelFamily& family, std::size_t k) {
  if (k >= family.num_models()) throw ThetaUnknown("parameter index out of range");
  const ModelFamily single = family.restrict_to(k);
  const auto& space = single.space();
  const std::size_t n = space.num_outcomes();

  lp::LinearProgram program;
  std::vector<std::size_t> q;
  for (std::size_t omega = 0; omega < n; ++omega)
    q.push_back(program.add_variable("Q[" + space.outcomes()[omega] + "]"));
  const std::size_t eps = program.add_variable("eps", lp::Bounds::free());

  std::vector<lp::Term> total;
  for (std::size_t omega = 0; omega < n; ++omega) {
    program.add_constraint({{q[omega], Rational(1)}, {eps, Rational(-1)}}, lp::Relation::GreaterEqual,
                           Rational(0));
    total.push_back({q[omega], Rational(1)});
  }
  program.add_constraint(std::move(total), lp::Relation::Equal, Rational(1), "normalization");
  for (std::size_t t = 1; t <= single.horizon(); ++t)
    for (std::size_t a = 0; a < space.num_atoms(t - 1); ++a)
      for (std::size_t j = 0; j < single.dims(); ++j) {
        std::vector<lp::Term> row;
        for (std::size_t omega : space.atoms(t - 1)[a])
          row.push_back({q[omega], single.increment(0, t, omega, j)});
        program.add_constraint(std::move(row), lp::Relation::Equal, Rational(0));
      }
  program.set_objective(lp::Sense::Maximize, {{eps, Rational(1)}});

  const auto solution = lp::solve(program, parallel::Execution::Serial);
  ClassicalVerdict verdict;
  if (solution.status == lp::Status::Optimal && solution.value > 0) {
    verdict.holds = true;
    RationalVector measure(n);
    for (std::size_t omega = 0; omega < n; ++omega) measure[omega] = solution.assignment[q[omega]];
    verdict.martingale_measure = std::move(measure);
    return verdict;
  }
  auto search = find_robust_arbitrage(single);
  if (!search.found)
    throw std::logic_error("model '" + family.thetas()[k] + "' has no EMM and no arbitrage");
  verdict.witness = std::move(search.strategy);
  return verdict;
}

}  // namespace rftap
