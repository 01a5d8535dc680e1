#include <gtest/gtest.h>

#include "fasttt/depar.hpp"
#include "fasttt/errors.hpp"
#include "fasttt/rounding.hpp"
#include "fasttt/structured_tt.hpp"
#include "fasttt/ttsvd.hpp"
#include "test_support.hpp"

using namespace fasttt;
using fasttt::testing::random_sparse;
using fasttt::testing::relative_diff;

namespace {

TTTensor depar_tt(const SparseTensor& a, std::size_t p) { return parallel_vector_round(build_structured_tt(a, p)); }

TruncationBudget budget(double eps, std::size_t p, RoundingMode mode) {
  TruncationBudget b;
  b.eps = eps;
  b.p = p;
  b.mode = mode;
  return b;
}

}  // namespace

TEST(TruncationBudget, StaticDelta) {
  // d = 5: p = 2 gives sqrt(2) + sqrt(2); p = 0 gives 0 + 2.
  EXPECT_DOUBLE_EQ(budget(0.1, 2, RoundingMode::Static).static_delta(10.0, 5), 1.0 / (2.0 * std::sqrt(2.0)));
  EXPECT_DOUBLE_EQ(budget(0.1, 0, RoundingMode::Static).static_delta(10.0, 5), 0.5);
  EXPECT_DOUBLE_EQ(budget(0.1, 4, RoundingMode::Static).static_delta(10.0, 5), 0.5);
}

TEST(TruncationBudget, TargetRank) {
  TruncationBudget b = budget(0.0, 1, RoundingMode::FixedRank);
  b.fixed_ranks = {3};
  EXPECT_EQ(b.target_rank(1), 3);
  EXPECT_EQ(b.target_rank(4), 3);
  b.fixed_ranks = {2, 5, 7};
  EXPECT_EQ(b.target_rank(2), 5);
}

TEST(RoundingMode, Parse) {
  EXPECT_EQ(parse_rounding_mode("static"), RoundingMode::Static);
  EXPECT_EQ(parse_rounding_mode("dynamic"), RoundingMode::Dynamic);
  EXPECT_EQ(parse_rounding_mode("fixed"), RoundingMode::FixedRank);
  EXPECT_THROW(parse_rounding_mode("adaptive"), InputError);
  EXPECT_EQ(to_string(RoundingMode::Dynamic), "dynamic");
}

TEST(EfficientRounding, RejectsUnorthogonalInput) {
  Rng rng(91);
  TTTensor t = fasttt::testing::random_tt(rng, Shape{4, 5, 6}, 3);
  EXPECT_THROW(efficient_tt_rounding(t, budget(0.1, 1, RoundingMode::Static)), ContractViolation);
}

TEST(EfficientRounding, RejectsPivotMismatch) {
  Rng rng(92);
  SparseTensor a = random_sparse(rng, Shape{4, 5, 6, 3}, 0.1);
  TTTensor t = depar_tt(a, 0);
  // Core 0 is the dense pivot; claiming p = 2 needs it left-orthonormal.
  EXPECT_THROW(efficient_tt_rounding(t, budget(0.1, 2, RoundingMode::Static)), ContractViolation);
  EXPECT_NO_THROW(efficient_tt_rounding(t, budget(0.1, 0, RoundingMode::Static)));
}

TEST(EfficientRounding, ExactAtTinyEpsMatchesTTSvdRanks) {
  Rng rng(93);
  for (int trial = 0; trial < 10; ++trial) {
    SparseTensor a = random_sparse(rng, Shape{5, 4, 6, 3}, 0.15);
    const DenseTensor d = densify(a);
    const std::vector<Index> want = tt_svd(d, 1e-14).ranks();
    for (std::size_t p = 0; p < 4; ++p) {
      TTTensor r = efficient_tt_rounding(depar_tt(a, p), budget(1e-14, p, RoundingMode::Static));
      EXPECT_EQ(r.ranks(), want) << "p=" << p;
      EXPECT_LE(relative_diff(d, tt_to_full(r)), 1e-12);
    }
  }
}

TEST(EfficientRounding, PropertyErrorWithinEps) {
  Rng rng(94);
  for (int trial = 0; trial < 20; ++trial) {
    Shape s = fasttt::testing::random_shape(rng, 2, 5, 6);
    SparseTensor a = random_sparse(rng, s, 0.05 + 0.4 * rng.uniform01());
    const DenseTensor d = densify(a);
    const std::size_t p = rng.below(s.order());
    for (double eps : {0.05, 0.3, 0.7}) {
      for (RoundingMode mode : {RoundingMode::Static, RoundingMode::Dynamic}) {
        RoundingTrace trace;
        TTTensor r = round_deparallelised(deparallelise(build_structured_tt(a, p)), budget(eps, p, mode), &trace);
        EXPECT_LE(relative_diff(d, tt_to_full(r)), eps * (1 + 1e-12));
        double spent = 0.0;
        for (const auto& st : trace.steps) {
          EXPECT_LE(st.error, st.delta * (1 + 1e-12));
          spent += st.error * st.error;
        }
        EXPECT_LE(std::sqrt(spent), eps * frobenius_norm(a) * (1 + 1e-12));
        EXPECT_EQ(trace.steps.size(), s.order() - 1);
      }
    }
  }
}

TEST(DynamicRounding, EqualsStaticWhenExactRank) {
  // Every step discards nothing, so both modes keep the same ranks.
  Rng rng(95);
  SparseTensor a = random_sparse(rng, Shape{6, 6, 6, 6}, 0.01);
  for (std::size_t p : {std::size_t{1}, std::size_t{2}}) {
    TTTensor t = depar_tt(a, p);
    TTTensor s = efficient_tt_rounding(t, budget(1e-14, p, RoundingMode::Static));
    TTTensor dy = dynamic_tt_rounding(t, budget(1e-14, p, RoundingMode::Dynamic));
    EXPECT_EQ(s.ranks(), dy.ranks());
  }
}

TEST(DynamicRounding, BudgetsSumToEps) {
  Rng rng(96);
  SparseTensor a = random_sparse(rng, Shape{6, 6, 6, 6}, 0.2);
  const double eps = 0.3;
  for (std::size_t p = 0; p < 4; ++p) {
    TTTensor t = depar_tt(a, p);
    RoundingTrace st, dt;
    TTTensor rs = efficient_tt_rounding(t, budget(eps, p, RoundingMode::Static), &st);
    TTTensor rd = dynamic_tt_rounding(t, budget(eps, p, RoundingMode::Dynamic), &dt);
    const DenseTensor d = densify(a);
    EXPECT_LE(relative_diff(d, tt_to_full(rs)), eps);
    EXPECT_LE(relative_diff(d, tt_to_full(rd)), eps);
    auto [dl, dr] = budget(eps, p, RoundingMode::Dynamic).dynamic_budgets(frobenius_norm(a), 4);
    EXPECT_NEAR(dl + dr, eps * frobenius_norm(a), 1e-12);
    for (const auto& step : dt.steps) EXPECT_GE(step.budget_after, -1e-12);
  }
}

TEST(FixedRankRounding, MatchesTTSvdFixedRank) {
  Rng rng(97);
  SparseTensor a = random_sparse(rng, Shape{6, 7, 5, 6}, 0.3);
  const DenseTensor d = densify(a);
  const std::vector<Index> targets{3, 4, 3};
  const double ref = relative_diff(d, tt_to_full(tt_svd_fixed_rank(d, targets)));
  for (std::size_t p = 0; p < 4; ++p) {
    TTTensor r = fixed_rank_rounding(depar_tt(a, p), targets, p);
    EXPECT_EQ(r.interior_ranks(), targets);
    const double err = relative_diff(d, tt_to_full(r));
    EXPECT_LE(err, ref * 1.05 + 1e-14) << "p=" << p;
  }
}

TEST(FixedRankRounding, TargetsCappedByInputRanks) {
  std::vector<MultiIndex> idx{{0, 1, 2}};
  std::vector<double> v{1.0};
  SparseTensor a(Shape{2, 3, 4}, idx, v);
  const std::vector<Index> one{5};
  TTTensor r = fixed_rank_rounding(depar_tt(a, 1), one, 1);
  EXPECT_EQ(r.interior_ranks(), (std::vector<Index>{1, 1}));
  const std::vector<Index> bad{1, 2, 3};
  EXPECT_THROW(fixed_rank_rounding(depar_tt(a, 1), bad, 1), ContractViolation);
}

TEST(Rounding, TotalTruncationKeepsRankOne) {
  Rng rng(98);
  SparseTensor a = random_sparse(rng, Shape{4, 4, 4}, 0.3);
  TTTensor r = efficient_tt_rounding(depar_tt(a, 1), budget(1.0, 1, RoundingMode::Static));
  for (Index k : r.interior_ranks()) EXPECT_GE(k, 1);
  EXPECT_LE(relative_diff(densify(a), tt_to_full(r)), 1.0 + 1e-12);
}

TEST(Rounding, DeparallelisedMatchesMaterialized) {
  Rng rng(99);
  SparseTensor a = random_sparse(rng, Shape{5, 6, 4, 5}, 0.1);
  for (std::size_t p = 0; p < 4; ++p) {
    StructuredTT s = build_structured_tt(a, p);
    TTTensor direct = efficient_tt_rounding(parallel_vector_round(s), budget(0.2, p, RoundingMode::Static));
    TTTensor implicit = round_deparallelised(deparallelise(s), budget(0.2, p, RoundingMode::Static));
    EXPECT_EQ(direct.ranks(), implicit.ranks());
    EXPECT_LE(relative_diff(tt_to_full(direct), tt_to_full(implicit)), 1e-12);
  }
}
