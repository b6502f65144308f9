#include "rftap/toy.hpp"

#include "rftap/errors.hpp"

namespace rftap {
namespace {

constexpr std::size_t kMaxHorizon = 16;

int coordinate(std::size_t omega, std::size_t horizon, std::size_t u) {
  // Bit (horizon - u) of omega is 0 for "+" at period u.
  return ((omega >> (horizon - u)) & 1U) ? -1 : 1;
}

// mu(t, atom of F_{t-1}) and sigma(t, atom) supplied by callbacks.
template <class Param>
AdaptedProcess toy_process(const FilteredSpace& space, const Rational& s0, Param&& param) {
  const std::size_t T = space.horizon();
  AdaptedProcess s(T, space.num_outcomes(), 1);
  for (std::size_t omega = 0; omega < space.num_outcomes(); ++omega) {
    s(0, omega, 0) = s0;
    for (std::size_t t = 1; t <= T; ++t) {
      const auto [mu, sigma] = param(t, space.atom_of(t - 1, omega));
      s(t, omega, 0) = s(t - 1, omega, 0) + mu + sigma * coordinate(omega, T, t);
    }
  }
  return s;
}

void require_one_period_pair(const ToyParams& params) {
  if (params.horizon != 1 || params.models.size() != 2)
    throw ParamError("the explicit family needs a one-period toy with two models");
  for (const auto& m : params.models)
    if (m.mu.size() != 1 || m.sigma.size() != 1 || m.sigma[0] <= 0)
      throw ParamError("model '" + m.name + "' needs one mu and one sigma > 0");
}

bool within(const Rational& value, const Rational& hi) { return value >= 0 && value <= hi; }

}  // namespace

FilteredSpace toy_space(std::size_t horizon, const std::optional<RationalVector>& prob) {
  if (horizon == 0) throw ParamError("toy horizon must be positive");
  if (horizon > kMaxHorizon) throw ParamError("toy horizon too large");
  const std::size_t n = std::size_t{1} << horizon;

  std::vector<std::string> outcomes(n);
  for (std::size_t omega = 0; omega < n; ++omega)
    for (std::size_t u = 1; u <= horizon; ++u)
      outcomes[omega] += coordinate(omega, horizon, u) > 0 ? '+' : '-';

  // Atoms of F_t are blocks of 2^(T-t) consecutive outcomes sharing a prefix.
  std::vector<std::vector<Atom>> partitions(horizon + 1);
  for (std::size_t t = 0; t <= horizon; ++t) {
    const std::size_t block = std::size_t{1} << (horizon - t);
    for (std::size_t start = 0; start < n; start += block) {
      Atom atom(block);
      for (std::size_t i = 0; i < block; ++i) atom[i] = start + i;
      partitions[t].push_back(std::move(atom));
    }
  }

  RationalVector p;
  if (prob) {
    if (prob->size() != n) throw ShapeMismatch("toy probability vector has the wrong length");
    p = *prob;
  } else {
    p.assign(n, Rational(1, static_cast<long>(n)));
  }
  return FilteredSpace(std::move(outcomes), std::move(partitions), std::move(p));
}

ModelFamily build_toy(const ToyParams& params) {
  if (params.models.empty()) throw ParamError("toy needs at least one model");
  FilteredSpace space = toy_space(params.horizon, params.prob);
  std::vector<std::string> names;
  std::vector<AdaptedProcess> processes;
  for (const auto& m : params.models) {
    if (m.mu.size() != params.horizon || m.sigma.size() != params.horizon)
      throw ParamError("model '" + m.name + "' needs " + std::to_string(params.horizon) +
                       " values of mu and sigma");
    for (const auto& s : m.sigma)
      if (s <= 0) throw ParamError("model '" + m.name + "' has sigma <= 0");
    names.push_back(m.name);
    processes.push_back(toy_process(space, params.s0, [&](std::size_t t, std::size_t) {
      return std::pair<const Rational&, const Rational&>(m.mu[t - 1], m.sigma[t - 1]);
    }));
  }
  return ModelFamily(std::move(space), std::move(names), std::move(processes));
}

std::map<int, Rational> toy_emm(const Rational& mu, const Rational& sigma) {
  if (!(abs(mu) < sigma)) throw DomainError("a unique martingale measure needs |mu| < sigma");
  const Rational ratio = mu / sigma;
  return {{1, (1 - ratio) / 2}, {-1, (1 + ratio) / 2}};
}

bool family_region_check(const ToyParams& params, const FamilyPoint& point) {
  require_one_period_pair(params);
  const Rational& mu1 = params.models[0].mu[0];
  const Rational& s1 = params.models[0].sigma[0];
  const Rational& mu2 = params.models[1].mu[0];
  const Rational& s2 = params.models[1].sigma[0];
  const Rational& a = point.alpha;
  const Rational& b = point.beta;
  return within(b + a * (s1 - mu1), 2 * s1) && within(-b + a * (s1 + mu1), 2 * s1) &&
         within(-b + (1 - a) * (s2 - mu2), 2 * s2) && within(b + (1 - a) * (s2 + mu2), 2 * s2);
}

RobustPricingSystem explicit_family(const ToyParams& params, const FamilyPoint& point) {
  if (!family_region_check(params, point))
    throw RegionError("(alpha, beta) = (" + to_string(point.alpha) + ", " + to_string(point.beta) +
                      ") lies outside the admissible region");
  const Rational& mu1 = params.models[0].mu[0];
  const Rational& s1 = params.models[0].sigma[0];
  const Rational& mu2 = params.models[1].mu[0];
  const Rational& s2 = params.models[1].sigma[0];
  const Rational& a = point.alpha;
  const Rational& b = point.beta;
  return RobustPricingSystem(RationalMatrix{
      {(b + a * (s1 - mu1)) / (2 * s1), (-b + a * (s1 + mu1)) / (2 * s1)},
      {(-b + (1 - a) * (s2 - mu2)) / (2 * s2), (b + (1 - a) * (s2 + mu2)) / (2 * s2)}});
}

LearningGrid learning_grid(std::size_t horizon, const std::vector<std::vector<GridPoint>>& grids,
                           std::size_t cap, const Rational& s0) {
  if (cap == 0) throw ParamError("learning grid cap must be positive");
  if (grids.size() != horizon) throw ParamError("need one grid per period");
  for (std::size_t t = 0; t < grids.size(); ++t) {
    if (grids[t].empty()) throw ParamError("grid for period " + std::to_string(t + 1) + " is empty");
    for (const auto& g : grids[t])
      if (g.second <= 0) throw ParamError("grid for period " + std::to_string(t + 1) + " has sigma <= 0");
  }
  FilteredSpace space = toy_space(horizon);

  // One digit per (t, atom of F_{t-1}); digit base is |grids[t-1]|.
  std::vector<std::size_t> slot_offset(horizon + 1, 0);
  std::vector<std::size_t> base;
  for (std::size_t t = 1; t <= horizon; ++t) {
    slot_offset[t - 1] = base.size();
    for (std::size_t a = 0; a < space.num_atoms(t - 1); ++a) base.push_back(grids[t - 1].size());
  }

  LearningGrid out{ModelFamily(space, {"_"}, {AdaptedProcess(horizon, space.num_outcomes(), 1)}),
                   Integer(1), false};
  for (std::size_t b : base) out.total *= b;
  out.cap_exceeded = out.total > cap;
  const std::size_t count = out.cap_exceeded ? cap : static_cast<std::size_t>(out.total);

  std::vector<std::size_t> digits(base.size(), 0);
  std::vector<std::string> names;
  std::vector<AdaptedProcess> processes;
  for (std::size_t m = 0; m < count; ++m) {
    std::string name = "u";
    for (std::size_t t = 1; t <= horizon; ++t) {
      name += t == 1 ? "[" : "|";
      for (std::size_t a = 0; a < space.num_atoms(t - 1); ++a)
        name += (a ? "," : "") + std::to_string(digits[slot_offset[t - 1] + a]);
    }
    names.push_back(name + "]");
    processes.push_back(toy_process(space, s0, [&](std::size_t t, std::size_t atom) {
      const GridPoint& g = grids[t - 1][digits[slot_offset[t - 1] + atom]];
      return std::pair<const Rational&, const Rational&>(g.first, g.second);
    }));
    // Odometer: the last digit moves fastest.
    for (std::size_t i = digits.size(); i-- > 0;) {
      if (++digits[i] < base[i]) break;
      digits[i] = 0;
    }
  }
  out.family = ModelFamily(std::move(space), std::move(names), std::move(processes));
  return out;
}

}  // namespace rftap
