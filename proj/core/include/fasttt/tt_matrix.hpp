#pragma once

#include <vector>

#include "fasttt/matrix_types.hpp"
#include "fasttt/tensor.hpp"
#include "fasttt/tt_tensor.hpp"

namespace fasttt {

/// Matrix product operator: core k has shape r_{k-1} x m_k x n_k x r_k and
/// is stored as a TTCore whose middle index is the fused i * n_k + j.
class TTMatrix {
 public:
  TTMatrix(std::vector<TTCore> cores, std::vector<Index> row_dims, std::vector<Index> col_dims);

  std::size_t order() const noexcept { return cores_.size(); }
  const std::vector<Index>& row_dims() const noexcept { return row_dims_; }
  const std::vector<Index>& col_dims() const noexcept { return col_dims_; }
  const TTCore& core(std::size_t k) const { return cores_[k]; }
  const std::vector<TTCore>& cores() const noexcept { return cores_; }
  std::vector<Index> ranks() const;

  Index rows() const;
  Index cols() const;

  /// M(a, i, j, b) of core k.
  double operator()(std::size_t k, Index a, Index i, Index j, Index b) const {
    return cores_[k](a, i * col_dims_[k] + j, b);
  }

 private:
  std::vector<TTCore> cores_;
  std::vector<Index> row_dims_;
  std::vector<Index> col_dims_;
};

/// Sparse matrix as a d-way tensor with fused modes m_k * n_k. Row index
/// r = (i_1..i_d) and column c = (j_1..j_d) are split row-major; the fused
/// coordinate of mode k is i_k * n_k + j_k.
SparseTensor tensorize_matrix(const SparseMatrix& m, const std::vector<Index>& row_dims,
                              const std::vector<Index>& col_dims);

/// Inverse of tensorize_matrix.
SparseMatrix untensorize_matrix(const SparseTensor& t, const std::vector<Index>& row_dims,
                                const std::vector<Index>& col_dims);

/// Reinterprets each core's mode as the fused (row, col) pair.
TTMatrix tt_split_mpo(const TTTensor& t, const std::vector<Index>& row_dims, const std::vector<Index>& col_dims);

/// y = M x with ranks multiplying.
TTTensor mpo_matvec(const TTMatrix& m, const TTTensor& v);

Matrix mpo_to_dense(const TTMatrix& m, Index max_entries = kDefaultDenseCap);

/// Factors row_dims/col_dims as ((m_1, n_1), ..., (m_d, n_d)) into fused
/// mode sizes m_k * n_k.
std::vector<Index> fused_dims(const std::vector<Index>& row_dims, const std::vector<Index>& col_dims);

}  // namespace fasttt
