#include "fasttt/quasi_perm.hpp"

#include <numeric>
#include <string>

#include "fasttt/errors.hpp"

namespace fasttt {

QuasiPermMatrix::QuasiPermMatrix(Index n_rows, std::vector<Index> col_to_row)
    : n_rows_(n_rows), col_to_row_(std::move(col_to_row)) {
  if (n_rows_ < 0) throw ShapeError("quasi-permutation matrix with negative row count");
  for (std::size_t j = 0; j < col_to_row_.size(); ++j) {
    const Index r = col_to_row_[j];
    if (r < 0 || r >= n_rows_) {
      throw ShapeError("quasi-permutation column " + std::to_string(j) + " points to row " + std::to_string(r) +
                       " outside [0, " + std::to_string(n_rows_) + ")");
    }
  }
}

QuasiPermMatrix QuasiPermMatrix::identity(Index n) {
  std::vector<Index> map(static_cast<std::size_t>(n));
  std::iota(map.begin(), map.end(), Index{0});
  return QuasiPermMatrix(n, std::move(map));
}

Matrix QuasiPermMatrix::to_dense() const {
  Matrix m = Matrix::Zero(n_rows_, cols());
  for (Index j = 0; j < cols(); ++j) m(row_of(j), j) = 1.0;
  return m;
}

std::optional<QuasiPermMatrix> QuasiPermMatrix::recognize(const Matrix& m) {
  std::vector<Index> map(static_cast<std::size_t>(m.cols()));
  for (Index j = 0; j < m.cols(); ++j) {
    Index found = -1;
    for (Index i = 0; i < m.rows(); ++i) {
      const double v = m(i, j);
      if (v == 0.0) continue;
      if (v != 1.0 || found >= 0) return std::nullopt;
      found = i;
    }
    if (found < 0) return std::nullopt;
    map[static_cast<std::size_t>(j)] = found;
  }
  return QuasiPermMatrix(m.rows(), std::move(map));
}

QuasiPermMatrix compose(const QuasiPermMatrix& a, const QuasiPermMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("quasi-permutation product: " + std::to_string(a.cols()) + " columns vs " +
                     std::to_string(b.rows()) + " rows");
  }
  std::vector<Index> map(static_cast<std::size_t>(b.cols()));
  for (Index j = 0; j < b.cols(); ++j) map[static_cast<std::size_t>(j)] = a.row_of(b.row_of(j));
  return QuasiPermMatrix(a.rows(), std::move(map));
}

}  // namespace fasttt
