#pragma once

#include <optional>

#include "rftap/rational.hpp"

namespace rftap::linalg {

// Reduced row echelon form of a rational matrix, in place. Returns the pivot
// column of each nonzero row.
std::vector<std::size_t> row_reduce(RationalMatrix& m, std::size_t num_columns);

// Exact basis of {x : A x = 0}. One vector per free column of the RREF, in
// column order; empty when the kernel is trivial. `num_columns` is needed
// when A has no rows.
RationalMatrix nullspace(const RationalMatrix& a, std::size_t num_columns);

// A particular solution of A x = b with free variables set to zero, or
// nullopt when the system is inconsistent.
std::optional<RationalVector> solve_linear(const RationalMatrix& a, const RationalVector& b,
                                           std::size_t num_columns);

}  // namespace rftap::linalg
