#pragma once

#include <span>
#include <string>
#include <vector>

#include "fasttt/depar.hpp"
#include "fasttt/tt_tensor.hpp"

namespace fasttt {

enum class RoundingMode { Static, Dynamic, FixedRank };

std::string to_string(RoundingMode m);
/// Accepts "static", "dynamic", "fixed"; throws InputError otherwise.
RoundingMode parse_rounding_mode(const std::string& s);

/// Accuracy request for the middle-to-edge rounding around pivot p (0-based).
struct TruncationBudget {
  double eps = 1e-14;
  std::size_t p = 0;
  RoundingMode mode = RoundingMode::Static;
  /// Fixed-rank targets for r_1..r_{d-1}; a single entry applies to all.
  std::vector<Index> fixed_ranks;

  /// Per-step delta of static mode: eps * norm / (sqrt(p) + sqrt(d-1-p)).
  double static_delta(double norm, std::size_t d) const;
  /// Initial {delta_left, delta_right} of dynamic mode.
  std::pair<double, double> dynamic_budgets(double norm, std::size_t d) const;
  /// Target for interior rank k (1-based split position, 1..d-1).
  Index target_rank(std::size_t k) const;
};

/// What happened at each truncation, in execution order.
struct RoundingTrace {
  double norm = 0.0;
  struct Step {
    std::size_t split;  // rank position r_split that was truncated
    double delta;
    double error;
    double budget_after;  // running budget after the step (dynamic mode)
  };
  std::vector<Step> steps;
};

/// Static-delta middle-to-edge rounding. The input's cores left of p must
/// have orthonormal left unfoldings and those right of p orthonormal right
/// unfoldings (as produced by parallel-vector rounding with the same p);
/// otherwise ContractViolation is thrown.
TTTensor efficient_tt_rounding(const TTTensor& t, const TruncationBudget& budget, RoundingTrace* trace = nullptr);

/// Same sweeps with budgets that shrink by the error actually spent.
TTTensor dynamic_tt_rounding(const TTTensor& t, const TruncationBudget& budget, RoundingTrace* trace = nullptr);

/// Same sweeps truncating to at most target_ranks (d-1 entries, or one
/// entry for all).
TTTensor fixed_rank_rounding(const TTTensor& t, std::span<const Index> target_ranks, std::size_t p,
                             RoundingTrace* trace = nullptr);

/// Rounds a deparallelised train without materializing its permutation
/// cores; dispatches on budget.mode.
TTTensor round_deparallelised(const DeparallelisedTT& t, const TruncationBudget& budget,
                              RoundingTrace* trace = nullptr);

}  // namespace fasttt
