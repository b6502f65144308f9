#include "rftap/lp.hpp"

#include <algorithm>
#include <map>

#include "rftap/errors.hpp"

namespace rftap::lp {

std::size_t LinearProgram::add_variable(std::string name, Bounds bounds) {
  if (bounds.lower && bounds.upper && *bounds.lower > *bounds.upper)
    throw ParamError("variable '" + name + "' has an empty range");
  variables_.push_back({std::move(name), std::move(bounds)});
  objective_.emplace_back(0);
  return variables_.size() - 1;
}

std::vector<Term> LinearProgram::normalize(std::vector<Term> terms) const {
  std::map<std::size_t, Rational> merged;
  for (auto& term : terms) {
    if (term.var >= variables_.size()) throw ShapeMismatch("term references an undeclared variable");
    merged[term.var] += term.coef;
  }
  std::vector<Term> out;
  for (auto& [var, coef] : merged)
    if (coef != 0) out.push_back({var, coef});
  return out;
}

void LinearProgram::set_objective(Sense sense, std::vector<Term> terms) {
  sense_ = sense;
  std::fill(objective_.begin(), objective_.end(), Rational(0));
  for (auto& term : normalize(std::move(terms))) objective_[term.var] = term.coef;
}

void LinearProgram::add_constraint(std::vector<Term> terms, Relation relation, Rational rhs,
                                   std::string name) {
  constraints_.push_back({normalize(std::move(terms)), relation, std::move(rhs), std::move(name)});
}

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
  }
  return "?";
}

namespace {

// How an original variable is expressed through nonnegative columns.
struct ColumnMap {
  enum class Kind { Shift, Mirror, Split } kind;
  std::size_t col = 0;   // x = lo + col | x = hi - col | x = col - col2
  std::size_t col2 = 0;
  Rational offset;
};

// Dense simplex tableau. Rows 0..m-1 are constraints, row m is the reduced
// cost row; the last column is the right-hand side. Columns
// [artificial_begin, artificial_begin + m) hold B^{-1}.
class Tableau {
 public:
  Tableau(RationalMatrix rows, std::size_t structural, parallel::Execution exec)
      : m_(rows.size()), art_(structural), width_(structural + rows.size() + 1), exec_(exec) {
    data_.reserve(m_ + 1);
    for (std::size_t i = 0; i < m_; ++i) {
      RationalVector row(width_, Rational(0));
      for (std::size_t j = 0; j < structural; ++j) row[j] = std::move(rows[i][j]);
      row[art_ + i] = 1;
      row[width_ - 1] = std::move(rows[i][structural]);
      data_.push_back(std::move(row));
      basis_.push_back(art_ + i);
    }
    data_.emplace_back(width_, Rational(0));
  }

  std::size_t rows() const { return m_; }
  std::size_t artificial_begin() const { return art_; }
  std::size_t rhs() const { return width_ - 1; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  const Rational& at(std::size_t i, std::size_t j) const { return data_[i][j]; }
  RationalVector& cost_row() { return data_[m_]; }
  std::size_t pivots() const { return pivots_; }

  // Reduced costs for cost vector c over all columns (artificials included).
  void price_out(const RationalVector& c) {
    auto& r = data_[m_];
    for (std::size_t j = 0; j < width_ - 1; ++j) r[j] = c[j];
    r[rhs()] = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational& cb = c[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < width_; ++j)
        if (data_[i][j] != 0) r[j] -= cb * data_[i][j];
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const Rational inv = 1 / data_[r][c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < width_; ++j) {
      if (data_[r][j] == 0) continue;
      data_[r][j] *= inv;
      nz.push_back(j);
    }
    const RationalVector& prow = data_[r];
    auto eliminate = [&](std::size_t i) {
      if (i == r || data_[i][c] == 0) return;
      auto& row = data_[i];
      const Rational factor = row[c];
      for (std::size_t j : nz) row[j] -= factor * prow[j];
    };
    // Tiny tableaus are not worth a parallel region.
    const bool wide = (m_ + 1) * nz.size() >= 4096;
    parallel::for_each_index(m_ + 1, eliminate, wide ? exec_ : parallel::Execution::Serial);
    basis_[r] = c;
    ++pivots_;
  }

  enum class Outcome { Optimal, Unbounded };

  // Bland's rule over entering columns [0, limit).
  Outcome run(std::size_t limit) {
    for (;;) {
      const auto& cost = data_[m_];
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j)
        if (cost[j] < 0) {
          enter = j;
          break;
        }
      if (enter == limit) return Outcome::Optimal;

      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (data_[i][enter] <= 0) continue;
        Rational ratio = data_[i][rhs()] / data_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (leave == m_) return Outcome::Unbounded;
      pivot(leave, enter);
    }
  }

 private:
  std::size_t m_;
  std::size_t art_;
  std::size_t width_;
  parallel::Execution exec_;
  RationalMatrix data_;
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
};

}  // namespace

LpSolution solve(const LinearProgram& program, parallel::Execution exec) {
  const auto& vars = program.variables();
  const auto& cons = program.constraints();
  const bool maximize = program.sense() == Sense::Maximize;

  // Column layout: mapped structural columns, then one slack per inequality.
  std::vector<ColumnMap> maps;
  std::size_t ncols = 0;
  std::vector<std::size_t> boxed;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const auto& b = vars[v].bounds;
    if (b.lower) {
      maps.push_back({ColumnMap::Kind::Shift, ncols++, 0, *b.lower});
      if (b.upper) boxed.push_back(v);
    } else if (b.upper) {
      maps.push_back({ColumnMap::Kind::Mirror, ncols++, 0, *b.upper});
    } else {
      maps.push_back({ColumnMap::Kind::Split, ncols, ncols + 1, Rational(0)});
      ncols += 2;
    }
  }
  const std::size_t m_orig = cons.size();
  const std::size_t m = m_orig + boxed.size();

  struct RowSpec {
    std::vector<std::pair<std::size_t, Rational>> entries;
    Relation relation;
    Rational rhs;
  };
  std::vector<RowSpec> specs;
  specs.reserve(m);
  for (const auto& con : cons) {
    RowSpec spec{{}, con.relation, con.rhs};
    for (const auto& term : con.terms) {
      const auto& map = maps[term.var];
      switch (map.kind) {
        case ColumnMap::Kind::Shift:
          spec.entries.emplace_back(map.col, term.coef);
          spec.rhs -= term.coef * map.offset;
          break;
        case ColumnMap::Kind::Mirror:
          spec.entries.emplace_back(map.col, -term.coef);
          spec.rhs -= term.coef * map.offset;
          break;
        case ColumnMap::Kind::Split:
          spec.entries.emplace_back(map.col, term.coef);
          spec.entries.emplace_back(map.col2, -term.coef);
          break;
      }
    }
    specs.push_back(std::move(spec));
  }
  for (std::size_t v : boxed) {
    const auto& b = vars[v].bounds;
    specs.push_back({{{maps[v].col, Rational(1)}}, Relation::LessEqual, *b.upper - *b.lower});
  }

  std::size_t structural = ncols;
  std::vector<std::size_t> slack_col(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    if (specs[i].relation != Relation::Equal) slack_col[i] = structural++;

  std::vector<int> flip(m, 1);
  RationalMatrix rows(m, RationalVector(structural + 1, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = rows[i];
    for (auto& [col, coef] : specs[i].entries) row[col] += coef;
    if (specs[i].relation == Relation::LessEqual) row[slack_col[i]] = 1;
    if (specs[i].relation == Relation::GreaterEqual) row[slack_col[i]] = -1;
    row[structural] = specs[i].rhs;
    if (specs[i].rhs < 0) {
      flip[i] = -1;
      for (auto& v : row) v = -v;
    }
  }

  Tableau tab(std::move(rows), structural, exec);
  const std::size_t width = structural + m;
  LpSolution sol;

  // Phase 1: minimize the sum of artificials.
  {
    RationalVector c(width, Rational(0));
    for (std::size_t i = 0; i < m; ++i) c[structural + i] = 1;
    tab.price_out(c);
    tab.run(structural);
    const Rational infeasibility = -tab.cost_row()[tab.rhs()];
    if (infeasibility > 0) {
      sol.status = Status::Infeasible;
      sol.multipliers.assign(m_orig, Rational(0));
      for (std::size_t i = 0; i < m_orig; ++i)
        sol.multipliers[i] = flip[i] * (Rational(1) - tab.cost_row()[structural + i]);
      sol.pivots = tab.pivots();
      return sol;
    }
  }

  // Drive zero-valued artificials out of the basis where a structural column
  // allows it. Rows where none does are redundant and keep their artificial.
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis()[i] < structural) continue;
    for (std::size_t j = 0; j < structural; ++j)
      if (tab.at(i, j) != 0) {
        tab.pivot(i, j);
        break;
      }
  }

  // Phase 2.
  RationalVector c(width, Rational(0));
  for (std::size_t v = 0; v < vars.size(); ++v) {
    Rational cv = maximize ? Rational(-program.objective()[v]) : program.objective()[v];
    if (cv == 0) continue;
    const auto& map = maps[v];
    switch (map.kind) {
      case ColumnMap::Kind::Shift: c[map.col] += cv; break;
      case ColumnMap::Kind::Mirror: c[map.col] -= cv; break;
      case ColumnMap::Kind::Split:
        c[map.col] += cv;
        c[map.col2] -= cv;
        break;
    }
  }
  tab.price_out(c);
  if (tab.run(structural) == Tableau::Outcome::Unbounded) {
    sol.status = Status::Unbounded;
    sol.pivots = tab.pivots();
    return sol;
  }

  RationalVector internal(width, Rational(0));
  for (std::size_t i = 0; i < m; ++i) internal[tab.basis()[i]] = tab.at(i, tab.rhs());

  sol.status = Status::Optimal;
  sol.assignment.assign(vars.size(), Rational(0));
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const auto& map = maps[v];
    switch (map.kind) {
      case ColumnMap::Kind::Shift: sol.assignment[v] = map.offset + internal[map.col]; break;
      case ColumnMap::Kind::Mirror: sol.assignment[v] = map.offset - internal[map.col]; break;
      case ColumnMap::Kind::Split: sol.assignment[v] = internal[map.col] - internal[map.col2]; break;
    }
  }
  sol.value = 0;
  for (std::size_t v = 0; v < vars.size(); ++v)
    if (program.objective()[v] != 0) sol.value += program.objective()[v] * sol.assignment[v];

  sol.multipliers.assign(m_orig, Rational(0));
  for (std::size_t i = 0; i < m_orig; ++i) {
    Rational y = -tab.cost_row()[structural + i];
    sol.multipliers[i] = (maximize ? -flip[i] : flip[i]) * y;
  }
  sol.pivots = tab.pivots();
  return sol;
}

// -- certificates -------------------------------------------------------------

namespace {

Rational row_activity(const Constraint& con, const RationalVector& x) {
  Rational s = 0;
  for (const auto& term : con.terms) s += term.coef * x[term.var];
  return s;
}

bool fail(std::string* why, std::string message) {
  if (why) *why = std::move(message);
  return false;
}

std::string row_label(const LinearProgram& p, std::size_t i) {
  const auto& name = p.constraints()[i].name;
  return "row " + std::to_string(i) + (name.empty() ? "" : " (" + name + ")");
}

}  // namespace

bool is_feasible(const LinearProgram& program, const RationalVector& x) {
  if (x.size() != program.num_variables()) return false;
  for (std::size_t v = 0; v < x.size(); ++v) {
    const auto& b = program.variables()[v].bounds;
    if (b.lower && x[v] < *b.lower) return false;
    if (b.upper && x[v] > *b.upper) return false;
  }
  for (const auto& con : program.constraints()) {
    const Rational a = row_activity(con, x);
    switch (con.relation) {
      case Relation::LessEqual: if (a > con.rhs) return false; break;
      case Relation::GreaterEqual: if (a < con.rhs) return false; break;
      case Relation::Equal: if (a != con.rhs) return false; break;
    }
  }
  return true;
}

RationalVector reduced_costs(const LinearProgram& program, const RationalVector& y) {
  RationalVector d = program.objective();
  for (std::size_t i = 0; i < program.num_constraints(); ++i) {
    if (y[i] == 0) continue;
    for (const auto& term : program.constraints()[i].terms) d[term.var] -= y[i] * term.coef;
  }
  return d;
}

bool verify_optimal(const LinearProgram& program, const LpSolution& solution, std::string* why) {
  if (solution.status != Status::Optimal) return fail(why, "status is not Optimal");
  const auto& x = solution.assignment;
  const auto& y = solution.multipliers;
  if (!is_feasible(program, x)) return fail(why, "assignment is infeasible");
  if (y.size() != program.num_constraints()) return fail(why, "wrong number of multipliers");

  Rational primal = 0;
  for (std::size_t v = 0; v < x.size(); ++v) primal += program.objective()[v] * x[v];
  if (primal != solution.value) return fail(why, "value differs from the objective at the assignment");

  const int sigma = program.sense() == Sense::Minimize ? 1 : -1;
  Rational dual = 0;
  for (std::size_t i = 0; i < program.num_constraints(); ++i) {
    const auto& con = program.constraints()[i];
    const int s = sigma * sign(y[i]);
    if (con.relation == Relation::GreaterEqual && s < 0)
      return fail(why, row_label(program, i) + ": multiplier has the wrong sign");
    if (con.relation == Relation::LessEqual && s > 0)
      return fail(why, row_label(program, i) + ": multiplier has the wrong sign");
    if (y[i] != 0 && row_activity(con, x) != con.rhs)
      return fail(why, row_label(program, i) + ": slack row with nonzero multiplier");
    dual += y[i] * con.rhs;
  }

  const RationalVector d = reduced_costs(program, y);
  for (std::size_t v = 0; v < d.size(); ++v) {
    const auto& b = program.variables()[v].bounds;
    const int s = sigma * sign(d[v]);
    if (s > 0) {
      if (!b.lower) return fail(why, "variable " + program.variables()[v].name + ": dual infeasible");
      if (x[v] != *b.lower)
        return fail(why, "variable " + program.variables()[v].name + ": complementary slackness");
      dual += d[v] * *b.lower;
    } else if (s < 0) {
      if (!b.upper) return fail(why, "variable " + program.variables()[v].name + ": dual infeasible");
      if (x[v] != *b.upper)
        return fail(why, "variable " + program.variables()[v].name + ": complementary slackness");
      dual += d[v] * *b.upper;
    }
  }
  if (dual != primal) return fail(why, "duality gap " + rftap::to_string(Rational(primal - dual)));
  return true;
}

bool verify_infeasible(const LinearProgram& program, const LpSolution& solution, std::string* why) {
  const auto& y = solution.multipliers;
  if (y.size() != program.num_constraints()) return fail(why, "wrong number of multipliers");
  Rational bound = 0;
  for (std::size_t i = 0; i < program.num_constraints(); ++i) {
    const auto& con = program.constraints()[i];
    if (con.relation == Relation::GreaterEqual && y[i] < 0)
      return fail(why, row_label(program, i) + ": multiplier has the wrong sign");
    if (con.relation == Relation::LessEqual && y[i] > 0)
      return fail(why, row_label(program, i) + ": multiplier has the wrong sign");
    bound += y[i] * con.rhs;
  }
  // d = -A^T y: the combined row reads -d.x >= y.b for every feasible x.
  RationalVector d(program.num_variables(), Rational(0));
  for (std::size_t i = 0; i < program.num_constraints(); ++i)
    for (const auto& term : program.constraints()[i].terms) d[term.var] -= y[i] * term.coef;
  for (std::size_t v = 0; v < d.size(); ++v) {
    const auto& b = program.variables()[v].bounds;
    if (d[v] > 0) {
      if (!b.lower) return fail(why, "variable " + program.variables()[v].name + ": ray is unbounded");
      bound += d[v] * *b.lower;
    } else if (d[v] < 0) {
      if (!b.upper) return fail(why, "variable " + program.variables()[v].name + ": ray is unbounded");
      bound += d[v] * *b.upper;
    }
  }
  if (bound <= 0) return fail(why, "combined row is satisfiable");
  return true;
}

}  // namespace rftap::lp
