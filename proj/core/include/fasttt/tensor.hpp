#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fasttt/matrix_types.hpp"
#include "fasttt/shape.hpp"

namespace fasttt {

/// Default cap on dense materialization (entries).
inline constexpr Index kDefaultDenseCap = 10'000'000;

/// COO sparse d-way tensor.
///
/// Entries are kept sorted by linear index, so the storage order is the
/// lexicographic order of the multi-indices. Explicit zeros are dropped on
/// construction and duplicate coordinates are rejected.
class SparseTensor {
 public:
  /// Zero tensor of the given shape.
  explicit SparseTensor(Shape shape);
  SparseTensor(Shape shape, std::span<const MultiIndex> coords, std::span<const double> values);

  static SparseTensor from_linear(Shape shape, std::vector<Index> linear, std::vector<double> values);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t order() const noexcept { return shape_.order(); }
  std::size_t nnz() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  std::span<const Index> linear_indices() const noexcept { return linear_; }
  std::span<const double> values() const noexcept { return values_; }

  MultiIndex index_of(std::size_t entry) const { return shape_.delinearize(linear_[entry]); }
  double at(std::span<const Index> idx) const;

  /// nnz / prod n_k.
  double density() const noexcept;

  friend bool operator==(const SparseTensor& a, const SparseTensor& b) {
    return a.shape_ == b.shape_ && a.linear_ == b.linear_ && a.values_ == b.values_;
  }

 private:
  SparseTensor(Shape shape, std::vector<Index> linear, std::vector<double> values, bool);

  Shape shape_;
  std::vector<Index> linear_;
  std::vector<double> values_;
};

/// Dense d-way tensor in row-major (vectorization) order.
class DenseTensor {
 public:
  explicit DenseTensor(Shape shape);
  DenseTensor(Shape shape, std::vector<double> values);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t order() const noexcept { return shape_.order(); }
  Index size() const noexcept { return shape_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::vector<double>& storage() noexcept { return values_; }

  double& operator[](Index lin) { return values_[static_cast<std::size_t>(lin)]; }
  double operator[](Index lin) const { return values_[static_cast<std::size_t>(lin)]; }
  double at(std::span<const Index> idx) const { return (*this)[shape_.linearize(idx)]; }
  double& at(std::span<const Index> idx) { return (*this)[shape_.linearize(idx)]; }

 private:
  Shape shape_;
  std::vector<double> values_;
};

/// Nonzero mode-`mode` fibers of a sparse tensor, grouped by their fixed
/// (d-1)-tuple of remaining coordinates.
///
/// Fibers are ordered lexicographically by the fixed tuple. Fiber f owns
/// entries [offsets[f], offsets[f+1]) of `positions`/`values`, sorted by the
/// position along `mode`.
struct FiberSet {
  Shape shape;
  std::size_t mode = 0;
  std::vector<Index> fixed;      // count() x (d-1) coordinates, row-major
  std::vector<Index> offsets;    // count() + 1
  std::vector<Index> positions;  // coordinate along `mode`
  std::vector<double> values;

  std::size_t count() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t fixed_width() const noexcept { return shape.order() - 1; }

  /// Coordinate along `k` (k != mode) of the fixed tuple of fiber `f`.
  Index fixed_coordinate(std::size_t f, std::size_t k) const {
    return fixed[f * fixed_width() + (k < mode ? k : k - 1)];
  }
};

// Conversions

DenseTensor densify(const SparseTensor& t, Index max_entries = kDefaultDenseCap);
/// Sparse view of a dense tensor; exact zeros are dropped.
SparseTensor sparsify(const DenseTensor& t);

// Index arithmetic

SparseTensor vectorize(const SparseTensor& t);
DenseTensor vectorize(const DenseTensor& t);

SparseTensor reshape(const SparseTensor& t, Shape new_shape);
DenseTensor reshape(const DenseTensor& t, Shape new_shape);

/// k-unfolding: rows are the first k modes, columns the remaining d-k.
/// Requires 1 <= k <= d-1.
SparseMatrix unfold(const SparseTensor& t, std::size_t k);
Matrix unfold(const DenseTensor& t, std::size_t k);

/// (k1, k2)-contraction with 0-based modes. The result modes are
/// a[0..k1), b[0..k2), b(k2..], a(k1..], i.e. b's free modes take the place
/// of a's contracted mode. Contracting two vectors yields shape {1}.
DenseTensor contract(const DenseTensor& a, std::size_t k1, const DenseTensor& b, std::size_t k2);

/// k-mode product: replaces mode k (size m.rows()) by m.cols(),
/// c(..., j, ...) = sum_l a(..., l, ...) m(l, j).
DenseTensor tensor_times_matrix(const DenseTensor& a, std::size_t k, const Matrix& m);

double frobenius_norm(const SparseTensor& t);
double frobenius_norm(const DenseTensor& t);

/// Groups the nonzeros by fixed (d-1)-tuple. No arithmetic is performed.
FiberSet extract_nonzero_fibers(const SparseTensor& t, std::size_t mode);

/// Sum of the rank-1 fiber terms; inverse of extract_nonzero_fibers.
SparseTensor assemble_from_fibers(const FiberSet& fibers);

/// Number of nonzero fibers along `mode` without materializing them.
std::size_t count_nonzero_fibers(const SparseTensor& t, std::size_t mode);

}  // namespace fasttt
