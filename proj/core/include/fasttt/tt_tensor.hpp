#pragma once

#include <span>
#include <vector>

#include "fasttt/matrix_types.hpp"
#include "fasttt/shape.hpp"
#include "fasttt/tensor.hpp"

namespace fasttt {

/// One TT core G of shape r_left x n x r_right, stored row-major so that
/// G(a, i, b) sits at (a * n + i) * r_right + b.
class TTCore {
 public:
  TTCore() = default;
  TTCore(Index r_left, Index n, Index r_right);
  TTCore(Index r_left, Index n, Index r_right, std::vector<double> data);

  Index r_left() const noexcept { return r_left_; }
  Index n() const noexcept { return n_; }
  Index r_right() const noexcept { return r_right_; }
  Index size() const noexcept { return r_left_ * n_ * r_right_; }

  double operator()(Index a, Index i, Index b) const { return data_[offset(a, i, b)]; }
  double& operator()(Index a, Index i, Index b) { return data_[offset(a, i, b)]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  /// (r_left * n) x r_right view.
  Eigen::Map<const RowMatrix> left_unfolding() const { return {data_.data(), r_left_ * n_, r_right_}; }
  Eigen::Map<RowMatrix> left_unfolding() { return {data_.data(), r_left_ * n_, r_right_}; }
  /// r_left x (n * r_right) view.
  Eigen::Map<const RowMatrix> right_unfolding() const { return {data_.data(), r_left_, n_ * r_right_}; }
  Eigen::Map<RowMatrix> right_unfolding() { return {data_.data(), r_left_, n_ * r_right_}; }
  /// The r_left x r_right slice G(:, i, :).
  Matrix slice(Index i) const;

  static TTCore from_left_unfolding(const Matrix& m, Index r_left, Index n);
  static TTCore from_right_unfolding(const Matrix& m, Index n, Index r_right);

  double norm() const;

 private:
  std::size_t offset(Index a, Index i, Index b) const {
    return static_cast<std::size_t>((a * n_ + i) * r_right_ + b);
  }

  Index r_left_ = 0;
  Index n_ = 0;
  Index r_right_ = 0;
  std::vector<double> data_;
};

/// Tensor train with ranks r_0 = r_d = 1.
class TTTensor {
 public:
  /// Validates boundary ranks and adjacent rank agreement.
  explicit TTTensor(std::vector<TTCore> cores);

  /// All-zero TT with every rank 1.
  static TTTensor zeros(const Shape& shape);

  std::size_t order() const noexcept { return cores_.size(); }
  Shape shape() const;
  /// r_0..r_d.
  std::vector<Index> ranks() const;
  /// r_1..r_{d-1}.
  std::vector<Index> interior_ranks() const;
  Index max_rank() const;

  const TTCore& core(std::size_t k) const { return cores_[k]; }
  TTCore& core(std::size_t k) { return cores_[k]; }
  const std::vector<TTCore>& cores() const noexcept { return cores_; }

  /// Total number of stored core entries.
  Index parameter_count() const;

 private:
  std::vector<TTCore> cores_;
};

double tt_entry(const TTTensor& t, std::span<const Index> idx);

/// Rank-1 TT whose core k holds vectors[k].
TTTensor tt_rank1(const std::vector<Vector>& vectors);

/// Block direct-sum cores of a + b; interior ranks add.
TTTensor tt_add(const TTTensor& a, const TTTensor& b);

TTTensor tt_scale(const TTTensor& t, double alpha);

/// Throws SizeLimitError when the dense size exceeds `max_entries`.
DenseTensor tt_to_full(const TTTensor& t, Index max_entries = kDefaultDenseCap);

double tt_inner(const TTTensor& a, const TTTensor& b);
/// Norm through a left-orthogonalizing QR sweep; no cancellation.
double tt_norm(const TTTensor& t);

/// Sum of a_i * t(i) over the stored entries of a.
double tt_inner(const SparseTensor& a, const TTTensor& t);

/// QR sweep making cores 0..d-2 left-orthonormal; the norm ends up in the
/// last core.
TTTensor left_orthogonalize(const TTTensor& t);
/// QR sweep making cores 1..d-1 right-orthonormal.
TTTensor right_orthogonalize(const TTTensor& t);

/// max |U^T U - I| over the left unfolding.
double left_orthogonality_defect(const TTCore& c);
/// max |V V^T - I| over the right unfolding.
double right_orthogonality_defect(const TTCore& c);

// Core contractions used by the sweeps.

/// G'(a, i, c) = sum_j m(a, j) G(j, i, c).
TTCore multiply_left(const Matrix& m, const TTCore& g);
/// G'(a, i, c) = sum_j G(a, i, j) m(j, c).
TTCore multiply_right(const TTCore& g, const Matrix& m);

}  // namespace fasttt
