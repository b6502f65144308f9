#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rftap/parallel.hpp"
#include "rftap/rational.hpp"

namespace rftap::lp {

struct Bounds {
  std::optional<Rational> lower;
  std::optional<Rational> upper;

  static Bounds free() { return {}; }
  static Bounds nonneg() { return {Rational(0), std::nullopt}; }
  static Bounds boxed(Rational lo, Rational hi) { return {std::move(lo), std::move(hi)}; }
};

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Minimize, Maximize };

struct Term {
  std::size_t var;
  Rational coef;
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation;
  Rational rhs;
  std::string name;
};

struct Variable {
  std::string name;
  Bounds bounds;
};

class LinearProgram {
 public:
  std::size_t add_variable(std::string name, Bounds bounds = Bounds::nonneg());
  // Terms with a zero coefficient are dropped; repeated variables are summed.
  void set_objective(Sense sense, std::vector<Term> terms);
  void add_constraint(std::vector<Term> terms, Relation relation, Rational rhs,
                      std::string name = {});

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  Sense sense() const { return sense_; }
  // Dense objective coefficients.
  const RationalVector& objective() const { return objective_; }

 private:
  std::vector<Term> normalize(std::vector<Term> terms) const;

  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  RationalVector objective_;
  Sense sense_ = Sense::Minimize;
};

enum class Status { Optimal, Infeasible, Unbounded };

const char* to_string(Status status);

struct LpSolution {
  Status status = Status::Infeasible;
  // Objective value when Optimal.
  Rational value;
  // Basic (vertex) solution when Optimal.
  RationalVector assignment;
  // One multiplier per constraint. Optimal: an optimal dual solution.
  // Infeasible: a Farkas ray. Unbounded: empty.
  RationalVector multipliers;
  std::size_t pivots = 0;
};

// Two-phase primal simplex over exact rationals with Bland's rule (lowest
// index enters; ratio ties leave by lowest basic index). Row elimination is
// the parallel kernel; Serial runs the same pivots in one thread.
LpSolution solve(const LinearProgram& program,
                 parallel::Execution exec = parallel::default_execution());

// -- certificate checks (independent of the solver internals) ---------------

// Every constraint and bound holds exactly at x.
bool is_feasible(const LinearProgram& program, const RationalVector& x);

// c - A^T y.
RationalVector reduced_costs(const LinearProgram& program, const RationalVector& y);

// Primal feasibility, dual sign feasibility, complementary slackness and
// equal primal/dual objectives, all exact. `why` receives the first failure.
bool verify_optimal(const LinearProgram& program, const LpSolution& solution,
                    std::string* why = nullptr);

// The multipliers prove infeasibility: combining the rows with them and
// minimizing over the variable bounds yields 0 < 0.
bool verify_infeasible(const LinearProgram& program, const LpSolution& solution,
                       std::string* why = nullptr);

}  // namespace rftap::lp
