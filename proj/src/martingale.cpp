#include "rftap/martingale.hpp"

#include "rftap/errors.hpp"
#include "rftap/linalg.hpp"

namespace rftap {
namespace {

void check_system(const ModelFamily& family, const RobustPricingSystem& system) {
  if (system.num_models() != family.num_models() || system.num_outcomes() != family.num_outcomes())
    throw ShapeMismatch("pricing system does not match the family");
}

void check_process(const ModelFamily& family, const VectorProcess& process) {
  if (process.size() != family.num_models())
    throw ShapeMismatch("vector process needs one component per model");
  for (const auto& m : process) {
    if (m.dims() != process.front().dims())
      throw ShapeMismatch("vector process components differ in dimension");
    if (auto v = validate_adapted(family.space(), m)) throw AdaptednessError(v->message);
  }
}

enum class Comparison { Equal, AtMost };

std::optional<MartingaleViolation> compare_over_atoms(const ModelFamily& family,
                                                      const RobustPricingSystem& system,
                                                      const VectorProcess& process, Comparison cmp) {
  check_system(family, system);
  check_process(family, process);
  const auto& space = family.space();
  const std::size_t d = process.front().dims();
  const std::size_t T = family.horizon();

  auto aggregate = [&](std::size_t t, const Atom& atom, std::size_t j) {
    Rational total = 0;
    for (std::size_t k = 0; k < family.num_models(); ++k)
      for (std::size_t omega : atom)
        if (system(k, omega) != 0) total += system(k, omega) * process[k](t, omega, j);
    return total;
  };

  for (std::size_t s = 0; s < T; ++s)
    for (std::size_t a = 0; a < space.num_atoms(s); ++a) {
      const Atom& atom = space.atoms(s)[a];
      for (std::size_t j = 0; j < d; ++j) {
        const Rational base = aggregate(s, atom, j);
        for (std::size_t t = s + 1; t <= T; ++t) {
          const Rational later = aggregate(t, atom, j);
          const bool ok = cmp == Comparison::Equal ? later == base : later <= base;
          if (!ok)
            return MartingaleViolation{
                s, t, a, j,
                "Q(M_" + std::to_string(t) + " 1_A) = " + to_string(later) +
                    (cmp == Comparison::Equal ? " differs from " : " exceeds ") + "Q(M_" +
                    std::to_string(s) + " 1_A) = " + to_string(base) + " on atom " +
                    std::to_string(a) + " of F_" + std::to_string(s)};
        }
      }
    }
  return std::nullopt;
}

}  // namespace

VectorProcess price_process(const ModelFamily& family) {
  VectorProcess out;
  for (std::size_t k = 0; k < family.num_models(); ++k) out.push_back(family.process(k));
  return out;
}

VectorProcess gain_process(const ModelFamily& family, const PredictableStrategy& strategy) {
  VectorProcess out;
  for (std::size_t k = 0; k < family.num_models(); ++k) {
    AdaptedProcess m(family.horizon(), family.num_outcomes(), 1);
    for (std::size_t t = 1; t <= family.horizon(); ++t) {
      const auto g = gain(family, strategy, k, t);
      for (std::size_t omega = 0; omega < family.num_outcomes(); ++omega) m(t, omega, 0) = g[omega];
    }
    out.push_back(std::move(m));
  }
  return out;
}

RationalMatrix atom_values(const FilteredSpace& space, const Claim& claim, std::size_t s) {
  if (s > space.horizon()) throw HorizonError("time beyond the horizon");
  RationalMatrix out(claim.num_models(), RationalVector(space.num_atoms(s)));
  for (std::size_t k = 0; k < claim.num_models(); ++k)
    for (std::size_t a = 0; a < space.num_atoms(s); ++a) {
      const Atom& atom = space.atoms(s)[a];
      out[k][a] = claim(k, atom.front());
      for (std::size_t omega : atom)
        if (claim(k, omega) != out[k][a])
          throw AdaptednessError("claim is not F_" + std::to_string(s) + "-measurable");
    }
  return out;
}

bool GeneralizedCondExp::contains(const RationalMatrix& candidate) const {
  if (candidate.size() != particular.size()) return false;
  const std::size_t atoms = particular.empty() ? 0 : particular.front().size();
  RationalVector diff;
  for (std::size_t k = 0; k < candidate.size(); ++k) {
    if (candidate[k].size() != atoms) return false;
    for (std::size_t a = 0; a < atoms; ++a) diff.push_back(candidate[k][a] - particular[k][a]);
  }
  // Columns of the matrix are the kernel basis vectors.
  RationalMatrix span(diff.size(), RationalVector(kernel_basis.size()));
  for (std::size_t b = 0; b < kernel_basis.size(); ++b)
    for (std::size_t k = 0; k < kernel_basis[b].size(); ++k)
      for (std::size_t a = 0; a < atoms; ++a) span[k * atoms + a][b] = kernel_basis[b][k][a];
  return linalg::solve_linear(span, diff, kernel_basis.size()).has_value();
}

Claim GeneralizedCondExp::as_claim(const FilteredSpace& space, const RationalMatrix& values) const {
  Claim out(values.size(), space.num_outcomes());
  for (std::size_t k = 0; k < values.size(); ++k)
    for (std::size_t omega = 0; omega < space.num_outcomes(); ++omega)
      out(k, omega) = values[k][space.atom_of(time, omega)];
  return out;
}

GeneralizedCondExp gen_cond_expectation(const ModelFamily& family, const RobustPricingSystem& system,
                                        const Claim& claim, std::size_t s) {
  check_system(family, system);
  claim.check_shape(family);
  if (s > family.horizon()) throw HorizonError("conditioning time beyond the horizon");
  const auto& space = family.space();
  const std::size_t K = family.num_models();
  const std::size_t atoms = space.num_atoms(s);
  const std::size_t unknowns = K * atoms;

  // Row A: sum_theta (sum_{omega in A} q) g^theta(A) = sum_{theta, omega in A} q f.
  RationalMatrix a(atoms, RationalVector(unknowns, Rational(0)));
  RationalVector b(atoms, Rational(0));
  for (std::size_t atom = 0; atom < atoms; ++atom)
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t omega : space.atoms(s)[atom]) {
        a[atom][k * atoms + atom] += system(k, omega);
        b[atom] += system(k, omega) * claim(k, omega);
      }

  auto particular = linalg::solve_linear(a, b, unknowns);
  if (!particular) throw std::logic_error("generalized conditional expectation system is inconsistent");

  auto unflatten = [&](const RationalVector& v) {
    RationalMatrix m(K, RationalVector(atoms));
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t atom = 0; atom < atoms; ++atom) m[k][atom] = v[k * atoms + atom];
    return m;
  };

  GeneralizedCondExp out;
  out.time = s;
  out.particular = unflatten(*particular);
  for (const auto& v : linalg::nullspace(a, unknowns)) out.kernel_basis.push_back(unflatten(v));
  return out;
}

std::optional<MartingaleViolation> is_gen_martingale(const ModelFamily& family,
                                                     const RobustPricingSystem& system,
                                                     const VectorProcess& process) {
  return compare_over_atoms(family, system, process, Comparison::Equal);
}

std::optional<MartingaleViolation> is_gen_supermartingale(const ModelFamily& family,
                                                          const RobustPricingSystem& system,
                                                          const VectorProcess& process) {
  return compare_over_atoms(family, system, process, Comparison::AtMost);
}

DensityProcess density_process(const ModelFamily& family, const RobustPricingSystem& system) {
  check_system(family, system);
  const auto& space = family.space();
  DensityProcess z(family.num_models(), family.horizon(), family.num_outcomes());
  for (std::size_t k = 0; k < family.num_models(); ++k)
    for (std::size_t t = 0; t <= family.horizon(); ++t)
      for (std::size_t a = 0; a < space.num_atoms(t); ++a) {
        // E_P[q/P | A] = (sum_{omega in A} q) / P(A).
        Rational mass = 0;
        for (std::size_t omega : space.atoms(t)[a]) mass += system(k, omega);
        const Rational value = mass / space.prob_of_atom(t, a);
        for (std::size_t omega : space.atoms(t)[a]) z(k, t, omega) = value;
      }
  return z;
}

std::optional<MartingaleViolation> check_deflated_martingale(const ModelFamily& family,
                                                             const RobustPricingSystem& system) {
  const DensityProcess z = density_process(family, system);
  const auto& space = family.space();
  const std::size_t T = family.horizon();

  // E_P[sum_theta Z^theta_t S^theta_t 1_A].
  auto expectation = [&](std::size_t t, const Atom& atom, std::size_t j) {
    Rational total = 0;
    for (std::size_t omega : atom) {
      Rational deflated = 0;
      for (std::size_t k = 0; k < family.num_models(); ++k)
        deflated += z(k, t, omega) * family.price(k, t, omega, j);
      total += space.prob(omega) * deflated;
    }
    return total;
  };

  for (std::size_t s = 0; s < T; ++s)
    for (std::size_t a = 0; a < space.num_atoms(s); ++a)
      for (std::size_t j = 0; j < family.dims(); ++j) {
        const Rational base = expectation(s, space.atoms(s)[a], j);
        for (std::size_t t = s + 1; t <= T; ++t) {
          const Rational later = expectation(t, space.atoms(s)[a], j);
          if (later != base)
            return MartingaleViolation{s, t, a, j,
                                       "E_P[Z_" + std::to_string(t) + " S_" + std::to_string(t) +
                                           " 1_A] = " + to_string(later) + " but E_P[Z_" +
                                           std::to_string(s) + " S_" + std::to_string(s) +
                                           " 1_A] = " + to_string(base)};
        }
      }
  return std::nullopt;
}

}  // namespace rftap
