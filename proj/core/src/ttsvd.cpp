#include "fasttt/ttsvd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fasttt/errors.hpp"
#include "fasttt/matrix_kernels.hpp"

namespace fasttt {

namespace {

template <class Truncate>
TTTensor sequential_svd(const DenseTensor& a, Truncate&& truncate) {
  const Shape& shape = a.shape();
  const std::size_t d = shape.order();
  std::vector<TTCore> cores;
  cores.reserve(d);
  // carry is the remainder as an (r_{k-1} n_k) x (prod_{j>k} n_j) matrix.
  Matrix carry = Eigen::Map<const RowMatrix>(a.values().data(), shape[0], shape.suffix_size(1));
  Index r_prev = 1;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    SVDResult svd = truncate(carry, k);
    promote_rank_zero(svd, carry.rows(), carry.cols());
    cores.push_back(TTCore::from_left_unfolding(svd.U, r_prev, shape[k]));
    r_prev = svd.rank;
    // S * Vt is rank x prod_{j>k} n_j in row-major tensor order; regroup it
    // as (rank * n_{k+1}) x prod_{j>k+1} n_j.
    RowMatrix sv = svd.S.asDiagonal() * svd.Vt;
    carry.resize(0, 0);
    const Index rest = shape.suffix_size(k + 2);
    carry = Eigen::Map<const RowMatrix>(sv.data(), r_prev * shape[k + 1], rest);
  }
  cores.push_back(TTCore::from_left_unfolding(carry, r_prev, shape[d - 1]));
  return TTTensor(std::move(cores));
}

}  // namespace

double svd_flops(double m, double n, double c_svd) { return c_svd * m * n * std::min(m, n); }

TTTensor tt_svd(const DenseTensor& a, double eps) {
  if (!(eps >= 0.0)) throw NumericalError("tt_svd: eps must be >= 0");
  const std::size_t d = a.order();
  if (d == 1) return TTTensor({TTCore(1, a.shape()[0], 1, {a.values().begin(), a.values().end()})});
  const double delta = eps / std::sqrt(static_cast<double>(d - 1)) * frobenius_norm(a);
  return sequential_svd(a, [&](const Matrix& m, std::size_t) { return svd_truncate_delta(m, delta); });
}

TTTensor tt_svd(const SparseTensor& a, double eps, Index max_dense_entries) {
  return tt_svd(densify(a, max_dense_entries), eps);
}

TTTensor tt_svd_fixed_rank(const DenseTensor& a, std::span<const Index> ranks) {
  const std::size_t d = a.order();
  if (ranks.size() + 1 != d) throw ShapeError("tt_svd_fixed_rank: need d-1 target ranks");
  if (d == 1) return TTTensor({TTCore(1, a.shape()[0], 1, {a.values().begin(), a.values().end()})});
  return sequential_svd(a, [&](const Matrix& m, std::size_t k) { return svd_truncate_rank(m, ranks[k]); });
}

TTTensor tt_rounding(const TTTensor& t, double eps) {
  if (!(eps >= 0.0)) throw NumericalError("tt_rounding: eps must be >= 0");
  const std::size_t d = t.order();
  if (d == 1) return t;
  TTTensor o = right_orthogonalize(t);
  std::vector<TTCore> cores = o.cores();
  const double delta = eps / std::sqrt(static_cast<double>(d - 1)) * cores[0].norm();
  for (std::size_t k = 0; k + 1 < d; ++k) {
    const Matrix l = cores[k].left_unfolding();
    SVDResult svd = svd_truncate_delta(l, delta);
    promote_rank_zero(svd, l.rows(), l.cols());
    cores[k] = TTCore::from_left_unfolding(svd.U, cores[k].r_left(), cores[k].n());
    cores[k + 1] = multiply_left(svd.S.asDiagonal() * svd.Vt, cores[k + 1]);
  }
  return TTTensor(std::move(cores));
}

double flops_ttsvd(const Shape& shape, std::span<const Index> ranks, double c_svd) {
  const std::size_t d = shape.order();
  if (ranks.size() != d + 1) throw ShapeError("flops_ttsvd: expected r_0..r_d");
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    double rest = 1.0;
    for (std::size_t j = k + 1; j < d; ++j) rest *= static_cast<double>(shape[j]);
    total += svd_flops(static_cast<double>(ranks[k]) * static_cast<double>(shape[k]), rest, c_svd);
  }
  return total;
}

}  // namespace fasttt
