#pragma once

#include <optional>
#include <vector>

#include "fasttt/matrix_types.hpp"
#include "fasttt/shape.hpp"

namespace fasttt {

/// {0,1} matrix with exactly one 1 per column, stored as the row of that 1.
class QuasiPermMatrix {
 public:
  QuasiPermMatrix() = default;
  /// Throws ShapeError if any entry of `col_to_row` is outside [0, n_rows).
  QuasiPermMatrix(Index n_rows, std::vector<Index> col_to_row);

  static QuasiPermMatrix identity(Index n);

  Index rows() const noexcept { return n_rows_; }
  Index cols() const noexcept { return static_cast<Index>(col_to_row_.size()); }
  Index row_of(Index col) const { return col_to_row_[static_cast<std::size_t>(col)]; }
  const std::vector<Index>& col_to_row() const noexcept { return col_to_row_; }

  Matrix to_dense() const;

  /// Returns the index map if `m` is exactly a quasi-permutation matrix.
  static std::optional<QuasiPermMatrix> recognize(const Matrix& m);

  friend bool operator==(const QuasiPermMatrix&, const QuasiPermMatrix&) = default;

 private:
  Index n_rows_ = 0;
  std::vector<Index> col_to_row_;
};

/// Product a * b, itself a quasi-permutation matrix.
QuasiPermMatrix compose(const QuasiPermMatrix& a, const QuasiPermMatrix& b);

}  // namespace fasttt
