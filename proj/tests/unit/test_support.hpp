#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fasttt/generators.hpp"
#include "fasttt/tensor.hpp"
#include "fasttt/tt_tensor.hpp"

namespace fasttt::testing {

inline Shape random_shape(Rng& rng, std::size_t d_min, std::size_t d_max, Index n_max) {
  const std::size_t d = d_min + rng.below(d_max - d_min + 1);
  std::vector<Index> dims(d);
  for (auto& n : dims) n = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n_max)));
  return Shape(dims);
}

// At least one nonzero; values in (-1, 1).
inline SparseTensor random_sparse(Rng& rng, const Shape& shape, double density) {
  const Index size = shape.size();
  Index nnz = std::max<Index>(1, static_cast<Index>(density * static_cast<double>(size)));
  nnz = std::min(nnz, size);
  std::vector<Index> lin;
  std::vector<char> used(static_cast<std::size_t>(size), 0);
  while (static_cast<Index>(lin.size()) < nnz) {
    const Index x = static_cast<Index>(rng.below(static_cast<std::uint64_t>(size)));
    if (used[static_cast<std::size_t>(x)]) continue;
    used[static_cast<std::size_t>(x)] = 1;
    lin.push_back(x);
  }
  std::sort(lin.begin(), lin.end());
  std::vector<double> vals(lin.size());
  for (auto& v : vals) {
    v = rng.uniform(-1.0, 1.0);
  }
  return SparseTensor::from_linear(shape, lin, vals);
}

inline TTTensor random_tt(Rng& rng, const Shape& shape, Index max_rank) {
  const std::size_t d = shape.order();
  std::vector<Index> r(d + 1, 1);
  for (std::size_t k = 1; k < d; ++k) r[k] = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(max_rank)));
  std::vector<TTCore> cores;
  for (std::size_t k = 0; k < d; ++k) {
    TTCore c(r[k], shape[k], r[k + 1]);
    for (auto& x : c.data()) x = rng.uniform(-1.0, 1.0);
    cores.push_back(std::move(c));
  }
  return TTTensor(std::move(cores));
}

inline Matrix random_matrix(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

inline DenseTensor random_dense(Rng& rng, const Shape& shape) {
  DenseTensor t(shape);
  for (auto& x : t.values()) x = rng.uniform(-1.0, 1.0);
  return t;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double dense_norm(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

inline double relative_diff(const DenseTensor& a, const DenseTensor& b) {
  double s = 0.0;
  for (Index i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  const double n = dense_norm(a.values());
  return n == 0.0 ? std::sqrt(s) : std::sqrt(s) / n;
}

}  // namespace fasttt::testing
