#include "rftap/linalg.hpp"

#include "rftap/errors.hpp"

namespace rftap::linalg {

std::vector<std::size_t> row_reduce(RationalMatrix& m, std::size_t num_columns) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < num_columns && row < m.size(); ++col) {
    std::size_t p = row;
    while (p < m.size() && m[p][col] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[row], m[p]);
    const Rational inv = 1 / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][col] == 0) continue;
      const Rational factor = m[i][col];
      for (std::size_t j = col; j < m[i].size(); ++j)
        if (m[row][j] != 0) m[i][j] -= factor * m[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

RationalMatrix nullspace(const RationalMatrix& a, std::size_t num_columns) {
  RationalMatrix m = a;
  for (const auto& r : m)
    if (r.size() != num_columns) throw ShapeMismatch("ragged matrix");
  const auto pivots = row_reduce(m, num_columns);

  std::vector<bool> is_pivot(num_columns, false);
  for (auto c : pivots) is_pivot[c] = true;

  RationalMatrix basis;
  for (std::size_t free = 0; free < num_columns; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(num_columns, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RationalVector> solve_linear(const RationalMatrix& a, const RationalVector& b,
                                           std::size_t num_columns) {
  if (a.size() != b.size()) throw ShapeMismatch("matrix and right-hand side differ in rows");
  RationalMatrix m = a;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != num_columns) throw ShapeMismatch("ragged matrix");
    m[i].push_back(b[i]);
  }
  const auto pivots = row_reduce(m, num_columns);
  for (std::size_t r = pivots.size(); r < m.size(); ++r)
    if (m[r][num_columns] != 0) return std::nullopt;

  RationalVector x(num_columns, Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m[r][num_columns];
  return x;
}

}  // namespace rftap::linalg
