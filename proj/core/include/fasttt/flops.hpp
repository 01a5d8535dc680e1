#pragma once

#include <span>
#include <vector>

#include "fasttt/tensor.hpp"

namespace fasttt {

/// Upper bound on the ranks after parallel-vector rounding around pivot p
/// (0-based): r_k <= min(R, n_0...n_{k-1}) for k <= p and
/// min(R, n_k...n_{d-1}) for k > p. Returns r_0..r_d.
std::vector<Index> rank_upper_bound(const Shape& shape, std::size_t p, Index R);

/// FLOP estimate of the rounding stage (units of c_svd). `ranks_tilde` are
/// the ranks entering the rounding and `ranks` those leaving it, both
/// r_0..r_d; p is 0-based.
double flops_fasttt(const Shape& shape, std::size_t p, std::span<const Index> ranks_tilde,
                    std::span<const Index> ranks, double c_svd = 1.0);

struct PSelection {
  std::size_t p = 0;
  /// Estimated FLOPs for every candidate pivot.
  std::vector<double> estimates;
  /// Nonzero fiber count per candidate pivot.
  std::vector<Index> fiber_counts;
};

/// Picks the pivot with the smallest flops_fasttt estimate; ties go to the
/// smaller p. The ranks entering the rounding are the upper bound, or the
/// actual deparallelised ranks when `precise` is set. Final ranks are
/// target_ranks (one entry for all splits, or d-1 entries) when given, else
/// the entering ranks; either way they are capped by the entering ranks and
/// by min(prod n_<k, prod n_>=k).
PSelection select_p(const SparseTensor& a, std::span<const Index> target_ranks = {}, bool precise = false,
                    double c_svd = 1.0);

}  // namespace fasttt
