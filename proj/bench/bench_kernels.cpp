// Serial vs OpenMP timings of the exact kernels. Arg 0 is Serial, 1 Parallel.
#include <benchmark/benchmark.h>

#include <random>

#include "random_market.hpp"
#include "rftap/arbitrage.hpp"
#include "rftap/hedging.hpp"
#include "rftap/lp.hpp"
#include "rftap/parallel.hpp"
#include "rftap/toy.hpp"

using namespace rftap;

namespace {

parallel::Execution mode(const benchmark::State& state) {
  return state.range(0) ? parallel::Execution::Parallel : parallel::Execution::Serial;
}

lp::LinearProgram packing_lp(std::size_t vars, std::size_t rows) {
  std::mt19937_64 rng(17);
  lp::LinearProgram p;
  std::vector<lp::Term> objective;
  for (std::size_t j = 0; j < vars; ++j) {
    p.add_variable("x" + std::to_string(j));
    objective.push_back({j, Rational(testkit::uniform(rng, 1, 5))});
  }
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<lp::Term> terms;
    for (std::size_t j = 0; j < vars; ++j)
      terms.push_back({j, Rational(testkit::uniform(rng, 1, 9), testkit::uniform(rng, 1, 4))});
    p.add_constraint(std::move(terms), lp::Relation::LessEqual, Rational(testkit::uniform(rng, 10, 40)));
  }
  p.set_objective(lp::Sense::Maximize, std::move(objective));
  return p;
}

// Every combination of two (mu, sigma) choices per period and atom.
ModelFamily learning_family(std::size_t horizon) {
  const std::vector<GridPoint> grid{{Rational(-1, 4), Rational(1)}, {Rational(1, 4), Rational(2)}};
  return learning_grid(horizon, std::vector<std::vector<GridPoint>>(horizon, grid), 256).family;
}

ModelFamily deep_toy(std::size_t horizon) {
  ToyParams p;
  p.horizon = horizon;
  for (int k = 0; k < 4; ++k) {
    ToyModel m{"m" + std::to_string(k), {}, {}};
    for (std::size_t t = 0; t < horizon; ++t) {
      m.sigma.push_back(Rational(1 + (k + t) % 3));
      m.mu.push_back(Rational(k - 2, 4));
    }
    p.models.push_back(std::move(m));
  }
  return build_toy(p);
}

void BM_LpSolve(benchmark::State& state) {
  const auto program = packing_lp(state.range(1), state.range(1) + 10);
  for (auto _ : state) benchmark::DoNotOptimize(lp::solve(program, mode(state)));
}
BENCHMARK(BM_LpSolve)->ArgsProduct({{0, 1}, {20, 40}})->Unit(benchmark::kMillisecond);

void BM_CheckNra(benchmark::State& state) {
  const ModelFamily family = learning_family(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(check_nra(family, {}, mode(state)));
  state.counters["models"] = static_cast<double>(family.num_models());
}
BENCHMARK(BM_CheckNra)->ArgsProduct({{0, 1}, {2, 3}})->Unit(benchmark::kMillisecond);

void BM_DpSuperhedge(benchmark::State& state) {
  const ModelFamily family = deep_toy(state.range(1));
  const Claim claim = Claim::price(family, family.space().horizon());
  for (auto _ : state) benchmark::DoNotOptimize(dp_superhedge(family, claim, mode(state)));
}
BENCHMARK(BM_DpSuperhedge)->ArgsProduct({{0, 1}, {3, 4}})->Unit(benchmark::kMillisecond);

void BM_MarketComplete(benchmark::State& state) {
  ToyParams p;
  p.horizon = state.range(1);
  p.models = {{"m", std::vector<Rational>(p.horizon, Rational(1, 4)), std::vector<Rational>(p.horizon, Rational(1))}};
  const ModelFamily family = build_toy(p);
  for (auto _ : state) benchmark::DoNotOptimize(market_complete(family, mode(state)));
}
BENCHMARK(BM_MarketComplete)->ArgsProduct({{0, 1}, {3, 4}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
