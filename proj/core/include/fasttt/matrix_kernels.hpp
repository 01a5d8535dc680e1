#pragma once

#include <cstdint>

#include "fasttt/matrix_types.hpp"
#include "fasttt/shape.hpp"

namespace fasttt {

/// Truncated SVD m ~ U * diag(S) * Vt.
struct SVDResult {
  Matrix U;   // rows x rank, orthonormal columns
  Vector S;   // rank values, nonincreasing, >= 0
  Matrix Vt;  // rank x cols, orthonormal rows
  Index rank = 0;
  /// Frobenius norm of the discarded part.
  double trunc_error = 0.0;
};

/// Economic QR m = Q * R with diag(R) >= 0.
struct QRResult {
  Matrix Q;  // rows x min(rows, cols)
  Matrix R;  // min(rows, cols) x cols, upper triangular
};

/// Smallest rank whose discarded tail has Frobenius norm <= delta.
///
/// delta == 0 selects the numerical rank: singular values below
/// max(rows, cols) * eps * sigma_1 are dropped. The result may have rank 0
/// when delta >= ||m||_F.
SVDResult svd_truncate_delta(const Matrix& m, double delta);

/// Best rank-min(r, min(rows, cols)) approximation. Requires r >= 1.
SVDResult svd_truncate_rank(const Matrix& m, Index r);

QRResult qr_economic(const Matrix& m);

/// All singular values, nonincreasing.
Vector singular_values(const Matrix& m);

/// Turns a rank-0 result into an explicit rank-1 zero factorization
/// (U = e_1, S = 0, Vt = e_1^T) so callers always get nonempty factors.
void promote_rank_zero(SVDResult& svd, Index rows, Index cols);

/// Rank that svd_truncate_delta would choose for the given singular values.
Index delta_rank(const Vector& singular_values, double delta, Index rows, Index cols);

/// Per-thread count of floating-point operations issued by the dense kernels
/// and by the general deparallelisation routine. Index-only routines never
/// touch it.
namespace flop_counter {
std::uint64_t value() noexcept;
void reset() noexcept;
void add(std::uint64_t n) noexcept;
}  // namespace flop_counter

}  // namespace fasttt
