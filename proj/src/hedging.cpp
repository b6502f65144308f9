#include "rftap/hedging.hpp"

#include <stdexcept>

#include "lp_blocks.hpp"
#include "rftap/arbitrage.hpp"
#include "rftap/errors.hpp"
#include "rftap/linalg.hpp"

namespace rftap {
namespace {

void require_nra(const ModelFamily& family, std::span<const StaticOption> options) {
  if (find_robust_arbitrage(family, options).found)
    throw NraViolated(options.empty() ? "NRA fails for this family"
                                      : "NRA fails for this family with its static options");
}

// Superhedge without the NRA precheck.
HedgeResult solve_superhedge(const ModelFamily& family, const Claim& claim,
                             std::span<const StaticOption> options) {
  claim.check_shape(family);
  lp::LinearProgram program;
  const std::size_t x = program.add_variable("x", lp::Bounds::free());
  detail::StrategyBlock h(program, family);
  detail::StaticBlock a(program, family, options);
  for (std::size_t k = 0; k < family.num_models(); ++k)
    for (std::size_t omega = 0; omega < family.num_outcomes(); ++omega) {
      std::vector<lp::Term> row{{x, Rational(1)}};
      h.append_gain(family, k, omega, row);
      a.append_payoff(k, omega, row);
      program.add_constraint(std::move(row), lp::Relation::GreaterEqual, claim(k, omega),
                             "dominate " + family.thetas()[k] + "," + family.space().outcomes()[omega]);
    }
  program.set_objective(lp::Sense::Minimize, {{x, Rational(1)}});

  const auto solution = lp::solve(program, parallel::Execution::Serial);
  if (solution.status == lp::Status::Unbounded)
    throw UnboundedBelow("superhedging price is -infinity: the market admits a robust arbitrage");
  if (solution.status != lp::Status::Optimal)
    throw std::logic_error("superhedging LP is infeasible");

  HedgeResult result;
  result.price = solution.value;
  result.strategy = h.extract(family, solution.assignment);
  result.static_positions = a.extract(solution.assignment);
  result.residuals =
      semi_static_gains(family, result.strategy, options, result.static_positions) + result.price - claim;
  return result;
}

}  // namespace

HedgeResult superhedge(const ModelFamily& family, const Claim& claim,
                       std::span<const StaticOption> options) {
  claim.check_shape(family);
  require_nra(family, options);
  return solve_superhedge(family, claim, options);
}

HedgeResult subhedge(const ModelFamily& family, const Claim& claim,
                     std::span<const StaticOption> options) {
  HedgeResult upper = superhedge(family, -claim, options);
  HedgeResult result;
  result.price = -upper.price;
  result.strategy = -upper.strategy;
  for (const auto& a : upper.static_positions) result.static_positions.push_back(-a);
  result.residuals = -upper.residuals;
  return result;
}

HedgeResult per_model_superhedge(const ModelFamily& family, const Claim& claim, std::size_t k) {
  claim.check_shape(family);
  if (k >= family.num_models()) throw ThetaUnknown("parameter index out of range");
  // A single model may admit arbitrage; the price is still finite unless
  // some strategy gains strictly everywhere.
  return solve_superhedge(family.restrict_to(k), Claim(RationalMatrix{claim.payoffs()[k]}), {});
}

Rational worst_case_price(const ModelFamily& family, const Claim& claim) {
  claim.check_shape(family);
  std::optional<Rational> worst;
  for (std::size_t k = 0; k < family.num_models(); ++k) {
    try {
      Rational p = per_model_superhedge(family, claim, k).price;
      if (!worst || p > *worst) worst = std::move(p);
    } catch (const UnboundedBelow&) {
    }
  }
  if (!worst) throw UnboundedBelow("every per-model superhedging price is -infinity");
  return *worst;
}

std::optional<Replication> replicable(const ModelFamily& family, const Claim& claim) {
  claim.check_shape(family);
  const auto& space = family.space();
  const std::size_t d = family.dims();
  std::vector<std::size_t> offset(family.horizon() + 1, 0);
  std::size_t columns = 1;
  for (std::size_t t = 1; t <= family.horizon(); ++t) {
    offset[t] = columns;
    columns += space.num_atoms(t - 1) * d;
  }

  RationalMatrix a;
  RationalVector b;
  for (std::size_t k = 0; k < family.num_models(); ++k)
    for (std::size_t omega = 0; omega < family.num_outcomes(); ++omega) {
      RationalVector row(columns, Rational(0));
      row[0] = 1;
      for (std::size_t t = 1; t <= family.horizon(); ++t)
        for (std::size_t j = 0; j < d; ++j)
          row[offset[t] + space.atom_of(t - 1, omega) * d + j] = family.increment(k, t, omega, j);
      a.push_back(std::move(row));
      b.push_back(claim(k, omega));
    }

  auto solution = linalg::solve_linear(a, b, columns);
  if (!solution) return std::nullopt;
  Replication rep;
  rep.cost = (*solution)[0];
  rep.strategy = PredictableStrategy::zero(space, d);
  for (std::size_t t = 1; t <= family.horizon(); ++t)
    for (std::size_t atom = 0; atom < space.num_atoms(t - 1); ++atom)
      for (std::size_t j = 0; j < d; ++j)
        rep.strategy.at_atom(t, atom, j) = (*solution)[offset[t] + atom * d + j];
  return rep;
}

CompletenessReport market_complete(const ModelFamily& family, parallel::Execution exec) {
  require_nra(family, {});
  const std::size_t n = family.num_outcomes();

  std::vector<Claim> claims;
  std::vector<std::string> labels;
  std::vector<std::size_t> everything(n);
  for (std::size_t omega = 0; omega < n; ++omega) everything[omega] = omega;
  for (std::size_t k = 0; k < family.num_models(); ++k) {
    claims.push_back(Claim::indicator(family, k, everything));
    labels.push_back("1^{" + family.thetas()[k] + "}_Omega");
    for (std::size_t omega = 0; omega < n; ++omega) {
      const std::size_t single[] = {omega};
      claims.push_back(Claim::indicator(family, k, single));
      labels.push_back("1^{" + family.thetas()[k] + "}_{" + family.space().outcomes()[omega] + "}");
    }
  }

  std::vector<char> ok(claims.size(), 0);
  parallel::for_each_index(
      claims.size(), [&](std::size_t i) { ok[i] = replicable(family, claims[i]).has_value(); }, exec);

  CompletenessReport report;
  report.complete = true;
  for (std::size_t i = 0; i < claims.size(); ++i)
    if (!ok[i]) {
      report.complete = false;
      report.witness = claims[i];
      report.witness_label = labels[i];
      break;
    }
  return report;
}

Rational dp_superhedge(const ModelFamily& family, const Claim& claim, parallel::Execution exec) {
  claim.check_shape(family);
  require_nra(family, {});
  const auto& space = family.space();
  const std::size_t d = family.dims();

  // value[k][omega] at the current time; theta-independent below T.
  RationalMatrix value = claim.payoffs();
  if (family.horizon() == 0) {
    Rational worst = value[0][0];
    for (const auto& row : value)
      for (const auto& v : row)
        if (v > worst) worst = v;
    return worst;
  }
  for (std::size_t t = family.horizon(); t >= 1; --t) {
    const std::size_t atoms = space.num_atoms(t - 1);
    RationalVector node_value(atoms);
    parallel::for_each_index(
        atoms,
        [&](std::size_t a) {
          lp::LinearProgram program;
          const std::size_t x = program.add_variable("x", lp::Bounds::free());
          std::vector<std::size_t> h;
          for (std::size_t j = 0; j < d; ++j)
            h.push_back(program.add_variable("h" + std::to_string(j), lp::Bounds::free()));
          for (std::size_t k = 0; k < family.num_models(); ++k)
            for (std::size_t omega : space.atoms(t - 1)[a]) {
              std::vector<lp::Term> row{{x, Rational(1)}};
              for (std::size_t j = 0; j < d; ++j) row.push_back({h[j], family.increment(k, t, omega, j)});
              program.add_constraint(std::move(row), lp::Relation::GreaterEqual, value[k][omega]);
            }
          program.set_objective(lp::Sense::Minimize, {{x, Rational(1)}});
          const auto solution = lp::solve(program, parallel::Execution::Serial);
          if (solution.status != lp::Status::Optimal)
            throw NraViolated("one-period robust arbitrage at t = " + std::to_string(t - 1) +
                              ", atom " + std::to_string(a));
          node_value[a] = solution.value;
        },
        exec);
    for (std::size_t k = 0; k < family.num_models(); ++k)
      for (std::size_t omega = 0; omega < family.num_outcomes(); ++omega)
        value[k][omega] = node_value[space.atom_of(t - 1, omega)];
  }
  return value[0][0];
}

}  // namespace rftap
