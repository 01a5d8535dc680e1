#pragma once

#include <vector>

#include "fasttt/matrix_types.hpp"
#include "fasttt/quasi_perm.hpp"
#include "fasttt/tensor.hpp"
#include "fasttt/tt_tensor.hpp"

namespace fasttt {

/// Exact rank-R tensor train built from the R nonzero fibers along the pivot
/// mode, kept implicit.
///
/// Fiber j (in FiberSet order) contributes e(i_1) x ... x v_j x ... x e(i_d).
/// Core k < p is described by its left unfolding ((r_{k-1} n_k) x R) and
/// core k > p by its transposed right unfolding ((n_k r_k) x R); both are
/// quasi-permutation matrices. The pivot core is the diagonal R x n_p x R
/// tensor with V(j, :, j) = v_j, stored as the R x n_p sparse matrix of
/// fibers.
struct StructuredTT {
  Shape shape{1};
  std::size_t p = 0;
  Index R = 0;
  /// Cores 0..p-1.
  std::vector<QuasiPermMatrix> left;
  /// Cores p+1..d-1, in mode order.
  std::vector<QuasiPermMatrix> right;
  SparseMatrix fibers;
  /// True for the all-zero input, which is stored as one zero fiber.
  bool zero = false;

  std::size_t order() const noexcept { return shape.order(); }
  /// r_0..r_d: boundary ranks 1, every interior rank R.
  std::vector<Index> ranks() const;
};

/// Groups the nonzero mode-p fibers of `a` into a StructuredTT. The zero
/// tensor yields R = 1 with a zero fiber and `zero` set.
StructuredTT build_structured_tt(const SparseTensor& a, std::size_t p);

/// Dense cores of the structured form. Refuses when the total core size
/// exceeds `max_entries`.
TTTensor structured_to_tt(const StructuredTT& s, Index max_entries = kDefaultDenseCap);

/// Materialized left unfolding (k < p) or transposed right unfolding (k > p)
/// of a dense core, as a quasi-permutation matrix if it is one.
std::optional<QuasiPermMatrix> recognize_left_perm_core(const TTCore& c);
std::optional<QuasiPermMatrix> recognize_right_perm_core(const TTCore& c);

}  // namespace fasttt
