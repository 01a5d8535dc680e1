#include <gtest/gtest.h>

#include <Eigen/SVD>

#include "fasttt/errors.hpp"
#include "fasttt/matrix_kernels.hpp"
#include "test_support.hpp"

using namespace fasttt;
using fasttt::testing::random_matrix;

namespace {

// Reference singular values from a second, unrelated backend.
Vector oracle_singular_values(const Matrix& m) { return Eigen::BDCSVD<Matrix>(m).singularValues(); }

Index tail_scan_rank(const Vector& s, double delta) {
  for (Index r = 0; r <= s.size(); ++r) {
    if (s.tail(s.size() - r).norm() <= delta) return r;
  }
  return s.size();
}

void expect_valid(const SVDResult& r, const Matrix& m) {
  ASSERT_EQ(r.U.cols(), r.rank);
  ASSERT_EQ(r.Vt.rows(), r.rank);
  ASSERT_EQ(r.S.size(), r.rank);
  for (Index i = 0; i < r.rank; ++i) {
    EXPECT_GE(r.S(i), 0.0);
    if (i > 0) EXPECT_LE(r.S(i), r.S(i - 1));
  }
  if (r.rank > 0) {
    EXPECT_LE((r.U.transpose() * r.U - Matrix::Identity(r.rank, r.rank)).norm(), 1e-12);
    EXPECT_LE((r.Vt * r.Vt.transpose() - Matrix::Identity(r.rank, r.rank)).norm(), 1e-12);
    const double err = (m - r.U * r.S.asDiagonal() * r.Vt).norm();
    EXPECT_NEAR(err, r.trunc_error, 1e-10 * std::max(1.0, m.norm()));
  }
}

}  // namespace

TEST(SvdTruncateDelta, TotalTruncation) {
  Rng rng(51);
  Matrix m = random_matrix(rng, 5, 4);
  // Slightly above the norm so rounding in the tail sum cannot keep a term.
  SVDResult r = svd_truncate_delta(m, m.norm() * (1 + 1e-12));
  EXPECT_EQ(r.rank, 0);
  EXPECT_NEAR(r.trunc_error, m.norm(), 1e-12);
  promote_rank_zero(r, 5, 4);
  EXPECT_EQ(r.rank, 1);
  EXPECT_EQ(r.S(0), 0.0);
  EXPECT_EQ((r.U * r.S.asDiagonal() * r.Vt).norm(), 0.0);
}

TEST(SvdTruncateDelta, DiagonalExactTail) {
  Matrix m = Matrix::Zero(3, 3);
  m.diagonal() << 3, 2, 1;
  SVDResult r = svd_truncate_delta(m, 1.0);
  EXPECT_EQ(r.rank, 2);
  EXPECT_NEAR(r.trunc_error, 1.0, 1e-14);
  EXPECT_NEAR(r.S(0), 3.0, 1e-14);
  EXPECT_NEAR(r.S(1), 2.0, 1e-14);
}

TEST(SvdTruncateDelta, RandomAgainstTailScan) {
  Rng rng(52);
  Matrix m = random_matrix(rng, 20, 30);
  const double delta = 0.3 * m.norm();
  SVDResult r = svd_truncate_delta(m, delta);
  expect_valid(r, m);
  EXPECT_LE(r.trunc_error, delta);
  EXPECT_EQ(r.rank, tail_scan_rank(oracle_singular_values(m), delta));
}

TEST(SvdTruncateDelta, ZeroDeltaIsNumericalRank) {
  Rng rng(53);
  Matrix a = random_matrix(rng, 40, 3), b = random_matrix(rng, 3, 25);
  Matrix m = a * b;
  EXPECT_EQ(svd_truncate_delta(m, 0.0).rank, 3);
  EXPECT_EQ(svd_truncate_delta(m.transpose(), 0.0).rank, 3);
}

TEST(SvdTruncateDelta, ExactlyLowRankUnfoldingHasNoNoiseRanks) {
  // Tall sparse rank-2 integer matrix; spurious third singular values must
  // stay far below 1e-14 * ||m||.
  Rng rng(61);
  Matrix basis = Matrix::Zero(3000, 2);
  for (Index i = 0; i < 3000; ++i) {
    if (i % 7 == 0) basis(i, 0) = 6.0;
    if (i % 5 == 1) basis(i, 1) = -1.0;
  }
  Matrix mix(2, 40);
  for (Index j = 0; j < 40; ++j) {
    mix(0, j) = static_cast<double>(rng.below(3)) - 1.0;
    mix(1, j) = static_cast<double>(rng.below(3)) - 1.0;
  }
  mix(0, 0) = 1.0;
  mix(1, 0) = 0.0;
  mix(0, 1) = 0.0;
  mix(1, 1) = 1.0;
  Matrix low = basis * mix;
  Vector s = singular_values(low);
  EXPECT_LE(s(2), 1e-14 * s(0));
  EXPECT_EQ(svd_truncate_delta(low, 1e-14 * low.norm()).rank, 2);
}

TEST(SvdTruncateDelta, RejectsBadInput) {
  Matrix m = Matrix::Ones(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(svd_truncate_delta(m, 0.1), NumericalError);
  EXPECT_THROW(svd_truncate_delta(Matrix(0, 3), 0.1), ShapeError);
  EXPECT_THROW(svd_truncate_delta(Matrix::Ones(2, 2), -1.0), NumericalError);
}

TEST(SvdTruncateDelta, PropertyMonotoneAndConsistent) {
  Rng rng(54);
  for (int trial = 0; trial < 40; ++trial) {
    const Index rows = 1 + static_cast<Index>(rng.below(30));
    const Index cols = 1 + static_cast<Index>(rng.below(30));
    Matrix m = random_matrix(rng, rows, cols);
    const double d1 = rng.uniform01() * m.norm();
    const double d2 = d1 + rng.uniform01() * m.norm();
    SVDResult r1 = svd_truncate_delta(m, d1), r2 = svd_truncate_delta(m, d2);
    EXPECT_GE(r1.rank, r2.rank);
    expect_valid(r1, m);
    const Vector s = oracle_singular_values(m);
    EXPECT_NEAR(r1.trunc_error * r1.trunc_error, s.tail(s.size() - r1.rank).squaredNorm(),
                1e-12 * std::max(1.0, m.squaredNorm()));
  }
}

TEST(SvdTruncateRank, Examples) {
  Rng rng(55);
  Matrix m = random_matrix(rng, 6, 4);
  SVDResult full = svd_truncate_rank(m, 10);
  EXPECT_EQ(full.rank, 4);
  EXPECT_LE(full.trunc_error, 1e-12 * m.norm());
  expect_valid(full, m);

  Vector u(5), v(3);
  u << 1, -2, 3, 0, 1;
  v << 2, 1, -1;
  Matrix outer = u * v.transpose();
  SVDResult r1 = svd_truncate_rank(outer, 1);
  EXPECT_LE(r1.trunc_error, 1e-13);
  EXPECT_THROW(svd_truncate_rank(m, 0), ShapeError);
}

TEST(SvdTruncateRank, TailAgainstOracle) {
  Rng rng(56);
  Matrix m = random_matrix(rng, 10, 10);
  SVDResult r = svd_truncate_rank(m, 3);
  const Vector s = oracle_singular_values(m);
  const double want = s.tail(7).squaredNorm();
  EXPECT_NEAR(r.trunc_error * r.trunc_error, want, 1e-10 * want);
  expect_valid(r, m);
}

TEST(SvdTruncateRank, PropertyErrorNonincreasing) {
  Rng rng(57);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m = random_matrix(rng, 2 + rng.below(15), 2 + rng.below(15));
    double prev = std::numeric_limits<double>::infinity();
    for (Index r = 1; r <= std::min(m.rows(), m.cols()); ++r) {
      const double e = svd_truncate_rank(m, r).trunc_error;
      EXPECT_LE(e, prev + 1e-14);
      prev = e;
    }
  }
}

TEST(Svd, SignConvention) {
  Rng rng(58);
  SVDResult r = svd_truncate_rank(random_matrix(rng, 7, 5), 5);
  for (Index c = 0; c < r.rank; ++c) {
    Index arg = 0;
    r.U.col(c).cwiseAbs().maxCoeff(&arg);
    EXPECT_GE(r.U(arg, c), 0.0);
  }
}

TEST(QrEconomic, Examples) {
  Rng rng(59);
  Matrix q0 = qr_economic(random_matrix(rng, 6, 3)).Q;
  QRResult r = qr_economic(q0);
  EXPECT_LE((r.R - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((r.Q - q0).cwiseAbs().maxCoeff(), 1e-14);

  Matrix v(3, 1);
  v << 3, 0, 4;
  QRResult c = qr_economic(v);
  EXPECT_NEAR(c.R(0, 0), 5.0, 1e-15);
  EXPECT_NEAR(c.Q(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(c.Q(2, 0), 0.8, 1e-15);
}

TEST(QrEconomic, PropertyReconstruction) {
  Rng rng(60);
  Matrix m = random_matrix(rng, 30, 8);
  QRResult r = qr_economic(m);
  EXPECT_EQ(r.Q.cols(), 8);
  EXPECT_LE((r.Q * r.R - m).norm(), 1e-12 * m.norm());
  for (int trial = 0; trial < 30; ++trial) {
    Matrix a = random_matrix(rng, 1 + rng.below(20), 1 + rng.below(20));
    QRResult f = qr_economic(a);
    const Index k = std::min(a.rows(), a.cols());
    EXPECT_EQ(f.Q.cols(), k);
    EXPECT_LE((f.Q.transpose() * f.Q - Matrix::Identity(k, k)).norm(), 1e-12);
    EXPECT_LE((f.Q * f.R - a).norm(), 1e-12 * a.norm());
    for (Index i = 0; i < k; ++i) {
      EXPECT_GE(f.R(i, i), 0.0);
      for (Index j = 0; j < i && j < f.R.cols(); ++j) EXPECT_EQ(f.R(i, j), 0.0);
    }
  }
}

TEST(DeltaRank, TieKeepsFewer) {
  Vector s(3);
  s << 5, 4, 3;
  // Tail exactly equal to delta is discarded.
  EXPECT_EQ(delta_rank(s, 3.0, 3, 3), 2);
  EXPECT_EQ(delta_rank(s, 5.0, 3, 3), 1);
  EXPECT_EQ(delta_rank(s, 2.999, 3, 3), 3);
}

TEST(Svd, WideAndLargeInputsTakeEveryPath) {
  Rng rng(62);
  for (auto [rows, cols] : {std::pair<Index, Index>{1300, 600}, {620, 700}, {9, 700}, {700, 9}}) {
    Matrix m = random_matrix(rng, rows, cols);
    SVDResult r = svd_truncate_rank(m, 8);
    expect_valid(r, m);
    const Vector s = oracle_singular_values(m);
    EXPECT_NEAR(r.S(0), s(0), 1e-10 * s(0));
    EXPECT_NEAR(singular_values(m)(7), s(7), 1e-10 * s(0));
  }
}

TEST(Svd, HeavilyDeflatedWideInput) {
  // Repeated 0/1 blocks plus zero columns: many equal and zero singular values.
  Rng rng(63);
  Matrix block = Matrix::Zero(40, 30);
  for (Index i = 0; i < 40; ++i) {
    for (Index j = 0; j < 30; ++j) block(i, j) = rng.uniform01() < 0.15 ? 1.0 : 0.0;
  }
  Matrix m = Matrix::Zero(600, 700);
  for (Index b = 0; b < 15; ++b) m.block(40 * b, 30 * b, 40, 30) = block;
  const Vector s = singular_values(block);
  for (Index r : {Index{1}, Index{45}, Index{450}}) {
    SVDResult res = svd_truncate_rank(m, r);
    expect_valid(res, m);
  }
  SVDResult exact = svd_truncate_delta(m, 1e-10 * m.norm());
  expect_valid(exact, m);
  Index block_rank = 0;
  for (Index i = 0; i < s.size(); ++i) block_rank += s(i) > 1e-10 * s(0) ? 1 : 0;
  EXPECT_EQ(exact.rank, 15 * block_rank);
  EXPECT_NEAR(exact.S(0), s(0), 1e-12 * s(0));
  EXPECT_LE(exact.trunc_error, 1e-10 * m.norm());
}
