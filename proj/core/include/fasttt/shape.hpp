#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fasttt {

/// Signed index type used for every size and linear offset.
using Index = std::int64_t;

/// 0-based multi-index (i_1, ..., i_d).
using MultiIndex = std::vector<Index>;

/// Dimensions n_1..n_d of a d-way tensor.
///
/// Linearization is row-major: the last index varies fastest, so
/// lin(i) = sum_k i_k * prod_{l>k} n_l. Every module shares this convention;
/// unfoldings, reshapes and TT core layouts are all reinterpretations of it.
class Shape {
 public:
  explicit Shape(std::vector<Index> dims);
  Shape(std::initializer_list<Index> dims) : Shape(std::vector<Index>(dims)) {}

  std::size_t order() const noexcept { return dims_.size(); }
  Index operator[](std::size_t k) const { return dims_[k]; }
  const std::vector<Index>& dims() const noexcept { return dims_; }

  /// prod n_k.
  Index size() const noexcept { return size_; }

  /// Product of the first `k` dimensions (1 when k == 0).
  Index prefix_size(std::size_t k) const;
  /// Product of dimensions k..d-1 (1 when k == d).
  Index suffix_size(std::size_t k) const;

  Index stride(std::size_t k) const { return strides_[k]; }

  Index linearize(std::span<const Index> idx) const;
  void delinearize(Index lin, std::span<Index> out) const;
  MultiIndex delinearize(Index lin) const;

  bool contains(std::span<const Index> idx) const noexcept;

  std::string to_string() const;

  friend bool operator==(const Shape& a, const Shape& b) { return a.dims_ == b.dims_; }

 private:
  std::vector<Index> dims_;
  std::vector<Index> strides_;
  Index size_ = 1;
};

/// Product of `values` with overflow detection; throws ShapeError on overflow.
Index checked_product(std::span<const Index> values);

}  // namespace fasttt
