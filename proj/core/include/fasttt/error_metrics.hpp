#pragma once

#include "fasttt/tensor.hpp"
#include "fasttt/tt_tensor.hpp"

namespace fasttt {

struct ErrorEstimate {
  /// ||A - B||_F / ||A||_F from the explicit TT difference.
  double relative = 0.0;
  /// Same quantity from ||A||^2 - 2<A, B> + ||B||^2. Loses about half the
  /// digits to cancellation, so it bottoms out near 1e-8.
  double relative_identity = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  /// False when the difference train was too large and `relative` fell back
  /// to the identity value.
  bool stable = true;
};

inline constexpr Index kDefaultErrorParamCap = 50'000'000;

/// Relative error of a TT approximation of a sparse tensor without
/// densifying either side. For ||A|| = 0 the absolute error ||B|| is reported.
/// The difference train is only formed when its core storage stays within
/// `max_params` entries.
ErrorEstimate measure_error(const SparseTensor& a, const TTTensor& b, Index max_params = kDefaultErrorParamCap);

/// Cheap variant: only the inner-product identity.
double relative_error_identity(const SparseTensor& a, const TTTensor& b);

/// Exact TT of `a` with the fewest parameters over all pivots.
TTTensor exact_tt(const SparseTensor& a);

}  // namespace fasttt
