#pragma once

#include <span>
#include <vector>

#include "fasttt/tensor.hpp"
#include "fasttt/tt_tensor.hpp"

namespace fasttt {

/// Sequential truncated-SVD decomposition of a dense tensor with relative
/// accuracy eps: every step uses delta = eps / sqrt(d-1) * ||a||_F.
TTTensor tt_svd(const DenseTensor& a, double eps);

/// Densifies `a` (refusing beyond `max_dense_entries`) and runs tt_svd.
TTTensor tt_svd(const SparseTensor& a, double eps, Index max_dense_entries = kDefaultDenseCap);

/// Same sweep truncating to at most ranks[k] at split k+1 (ranks has d-1
/// entries).
TTTensor tt_svd_fixed_rank(const DenseTensor& a, std::span<const Index> ranks);

/// Right-to-left QR sweep followed by a left-to-right truncated SVD sweep.
TTTensor tt_rounding(const TTTensor& t, double eps);

/// FLOP estimate of tt_svd in units of c_svd: the sum over k = 1..d-1 of
/// f(r_{k-1} n_k, prod_{j>k} n_j) with f(m, n) = c_svd * m * n * min(m, n).
/// `ranks` is r_0..r_d.
double flops_ttsvd(const Shape& shape, std::span<const Index> ranks, double c_svd = 1.0);

/// f(m, n) = c_svd * m * n * min(m, n).
double svd_flops(double m, double n, double c_svd = 1.0);

}  // namespace fasttt
