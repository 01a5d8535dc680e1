#pragma once

#include <vector>

#include "fasttt/matrix_types.hpp"
#include "fasttt/quasi_perm.hpp"
#include "fasttt/structured_tt.hpp"
#include "fasttt/tt_tensor.hpp"

namespace fasttt {

/// m = N * T where N keeps the first column of every parallel class, in
/// column order, and T holds the scale factors.
struct DeparResult {
  Matrix N;
  Matrix T;
};

/// Columns u and v are parallel when ||u - (u . v^) v^|| <= 1e-12 ||u||.
/// Zero columns are dropped (their T column is zero).
DeparResult depar_general(const Matrix& m);

struct QuasiPermDepar {
  QuasiPermMatrix N;  // one column per used row, ascending
  QuasiPermMatrix T;
};

/// Index-only deparallelisation of a quasi-permutation matrix.
QuasiPermDepar depar_quasi_perm(const QuasiPermMatrix& m);

/// Lossless tensor train after parallel-vector rounding. Cores left of the
/// pivot are kept as quasi-permutation left unfoldings, cores right of it as
/// quasi-permutation transposed right unfoldings; only the pivot core is
/// dense.
struct DeparallelisedTT {
  Shape shape{1};
  std::size_t p = 0;
  std::vector<QuasiPermMatrix> left;   // cores 0..p-1
  std::vector<QuasiPermMatrix> right;  // cores p+1..d-1
  TTCore pivot;
  bool zero = false;

  std::size_t order() const noexcept { return shape.order(); }
  /// r~_0..r~_d.
  std::vector<Index> ranks() const;
  TTCore left_core(std::size_t k) const;
  TTCore right_core(std::size_t k) const;
  TTTensor to_tt() const;
};

/// Sweeps the structured form from both ends towards the pivot, replacing
/// each quasi-permutation core by its deparallelised factor.
DeparallelisedTT deparallelise(const StructuredTT& s);

/// deparallelise(s).to_tt().
TTTensor parallel_vector_round(const StructuredTT& s);

/// Ranks r~_0..r~_d that deparallelise would produce, without forming the
/// pivot core.
std::vector<Index> depar_ranks(const StructuredTT& s);

}  // namespace fasttt
