#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fasttt/depar.hpp"
#include "fasttt/error_metrics.hpp"
#include "fasttt/flops.hpp"
#include "fasttt/rounding.hpp"
#include "fasttt/structured_tt.hpp"
#include "fasttt/tensor.hpp"
#include "fasttt/tt_tensor.hpp"

namespace fasttt {

/// eps requests at or below zero are raised to this value.
inline constexpr double kMinEps = 1e-14;

struct FastTTOptions {
  double eps = kMinEps;
  /// 0-based pivot; chosen by select_p when absent.
  std::optional<std::size_t> p;
  RoundingMode mode = RoundingMode::Static;
  /// Targets for fixed-rank mode (one entry, or d-1).
  std::vector<Index> fixed_ranks;
  /// Let select_p run the deparallelisation instead of using the rank bound.
  bool precise_p = false;
  /// Measure the achieved relative error after decomposing.
  bool measure_error = true;
  Index error_param_cap = kDefaultErrorParamCap;
  double c_svd = 1.0;
};

struct DecompositionReport {
  std::string method;
  /// 0-based pivot (fasttt only).
  std::optional<std::size_t> p;
  /// Number of nonzero pivot fibers (fasttt only).
  std::optional<Index> R;
  /// Ranks entering the rounding, r~_0..r~_d (fasttt only).
  std::vector<Index> ranks_tilde;
  /// Final ranks r_0..r_d.
  std::vector<Index> ranks;
  double eps = 0.0;
  RoundingMode mode = RoundingMode::Static;
  std::optional<ErrorEstimate> error;
  double flops_ttsvd = 0.0;
  double flops_fasttt = 0.0;
  double wall_seconds = 0.0;
  double cpu_seconds = 0.0;
  std::vector<std::string> warnings;

  /// Error contract: the achieved relative error is within eps (always true
  /// in fixed-rank mode, and when no error was measured).
  bool contract_ok() const;
};

struct Decomposition {
  TTTensor tt;
  DecompositionReport report;
};

/// Sparse tensor to TT: fiber grouping, parallel-vector rounding, then
/// truncated-SVD rounding around the pivot.
Decomposition fasttt(const SparseTensor& a, const FastTTOptions& options = {});

/// Densify-and-sweep baseline with the same report.
Decomposition ttsvd_decompose(const SparseTensor& a, double eps, bool measure_error = true,
                              Index max_dense_entries = kDefaultDenseCap);

/// Wall and per-thread CPU clocks.
class Stopwatch {
 public:
  Stopwatch();
  double wall_seconds() const;
  double cpu_seconds() const;

 private:
  double wall0_;
  double cpu0_;
};

}  // namespace fasttt
