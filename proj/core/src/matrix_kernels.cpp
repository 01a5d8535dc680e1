#include "fasttt/matrix_kernels.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fasttt/errors.hpp"

extern "C" void dgesdd_(const char* jobz, const int* m, const int* n, double* a, const int* lda, double* s, double* u,
                        const int* ldu, double* vt, const int* ldvt, double* work, const int* lwork, int* iwork,
                        int* info);

namespace fasttt {

namespace flop_counter {
namespace {
thread_local std::uint64_t g_flops = 0;
}
std::uint64_t value() noexcept { return g_flops; }
void reset() noexcept { g_flops = 0; }
void add(std::uint64_t n) noexcept { g_flops += n; }
}  // namespace flop_counter

namespace {

// Up to this many columns one-sided Jacobi behind a column-pivoted QR is used.
// It resolves tiny singular values of exactly low-rank inputs to ~1e-13
// relative; divide-and-conquer leaves noise around 1e-11 there.
constexpr Index kJacobiMaxCols = 512;

struct FullSvd {
  Vector s;
  Matrix u;  // thin, rows x min(rows, cols); empty without vectors
  Matrix v;
};

// Divide-and-conquer from LAPACK. Eigen's BDCSVD (3.4.0) indexes out of
// bounds in perturbCol0 on some deflated inputs, e.g. banded unfoldings.
FullSvd lapack_svd(const Matrix& a, bool vectors) {
  int m = static_cast<int>(a.rows());
  int n = static_cast<int>(a.cols());
  const int k = std::min(m, n);
  Matrix work_a = a;
  FullSvd out;
  out.s.resize(k);
  char jobz = vectors ? 'S' : 'N';
  if (vectors) {
    out.u.resize(m, k);
    out.v.resize(k, n);  // holds V^T until the end
  }
  int ldu = vectors ? m : 1;
  int ldvt = vectors ? k : 1;
  double dummy = 0.0;
  double* u = vectors ? out.u.data() : &dummy;
  double* vt = vectors ? out.v.data() : &dummy;
  std::vector<int> iwork(8 * static_cast<std::size_t>(k));
  int lwork = -1;
  int info = 0;
  double query = 0.0;
  dgesdd_(&jobz, &m, &n, work_a.data(), &m, out.s.data(), u, &ldu, vt, &ldvt, &query, &lwork, iwork.data(), &info);
  lwork = static_cast<int>(query);
  std::vector<double> work(static_cast<std::size_t>(lwork));
  dgesdd_(&jobz, &m, &n, work_a.data(), &m, out.s.data(), u, &ldu, vt, &ldvt, work.data(), &lwork, iwork.data(),
          &info);
  if (info != 0) throw NumericalError("dgesdd failed, info " + std::to_string(info));
  if (vectors) out.v.transposeInPlace();
  return out;
}

// SVD of a tall-or-square matrix.
FullSvd tall_svd(const Matrix& a, bool vectors) {
  const unsigned opts = vectors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  FullSvd out;
  if (a.cols() <= kJacobiMaxCols) {
    Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> svd(a, opts);
    out.s = svd.singularValues();
    if (vectors) {
      out.u = svd.matrixU();
      out.v = svd.matrixV();
    }
    return out;
  }
  return lapack_svd(a, vectors);
}

void check_input(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw ShapeError(std::string(what) + ": empty matrix");
  }
  if (!m.allFinite()) throw NumericalError(std::string(what) + ": non-finite matrix entry");
}

std::uint64_t svd_cost(Index m, Index n) {
  return static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(std::min(m, n));
}

using RankRule = std::function<Index(const Vector&)>;

SVDResult thin_svd_tall(const Matrix& a, const RankRule& rule) {
  FullSvd svd = tall_svd(a, true);
  const Index rank = rule(svd.s);
  SVDResult out;
  out.U = svd.u.leftCols(rank);
  out.S = svd.s.head(rank);
  out.Vt = svd.v.leftCols(rank).transpose();
  out.rank = rank;
  out.trunc_error = svd.s.tail(svd.s.size() - rank).norm();
  return out;
}

void normalize_signs(SVDResult& r) {
  for (Index c = 0; c < r.rank; ++c) {
    Index arg = 0;
    r.U.col(c).cwiseAbs().maxCoeff(&arg);
    if (r.U(arg, c) < 0.0) {
      r.U.col(c) = -r.U.col(c);
      r.Vt.row(c) = -r.Vt.row(c);
    }
  }
}

SVDResult truncated_svd(const Matrix& m, const RankRule& rule) {
  flop_counter::add(svd_cost(m.rows(), m.cols()));
  SVDResult out;
  if (m.cols() > m.rows()) {
    Matrix mt = m.transpose();
    SVDResult t = thin_svd_tall(mt, rule);
    out.U = t.Vt.transpose();
    out.S = std::move(t.S);
    out.Vt = t.U.transpose();
    out.rank = t.rank;
    out.trunc_error = t.trunc_error;
  } else {
    out = thin_svd_tall(m, rule);
  }
  normalize_signs(out);
  return out;
}

}  // namespace

Index delta_rank(const Vector& s, double delta, Index rows, Index cols) {
  const Index k = s.size();
  if (k == 0) return 0;
  if (delta <= 0.0) {
    if (s(0) == 0.0) return 0;
    const double cutoff = static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() * s(0);
    Index r = 0;
    while (r < k && s(r) >= cutoff) ++r;
    return r;
  }
  // tail2 = sum of squares of s(r..k-1); walk r downward while the tail fits.
  const double delta2 = delta * delta;
  double tail2 = 0.0;
  Index r = k;
  while (r > 0) {
    const double next = tail2 + s(r - 1) * s(r - 1);
    if (next > delta2) break;
    tail2 = next;
    --r;
  }
  return r;
}

SVDResult svd_truncate_delta(const Matrix& m, double delta) {
  check_input(m, "svd_truncate_delta");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw NumericalError("svd_truncate_delta: delta must be finite and >= 0");
  const Index rows = m.rows();
  const Index cols = m.cols();
  return truncated_svd(m, [&](const Vector& s) { return delta_rank(s, delta, rows, cols); });
}

SVDResult svd_truncate_rank(const Matrix& m, Index r) {
  check_input(m, "svd_truncate_rank");
  if (r < 1) throw ShapeError("svd_truncate_rank: target rank must be >= 1");
  return truncated_svd(m, [&](const Vector& s) { return std::min<Index>(r, s.size()); });
}

Vector singular_values(const Matrix& m) {
  check_input(m, "singular_values");
  flop_counter::add(svd_cost(m.rows(), m.cols()));
  if (m.cols() > m.rows()) return tall_svd(m.transpose(), false).s;
  return tall_svd(m, false).s;
}

void promote_rank_zero(SVDResult& svd, Index rows, Index cols) {
  if (svd.rank > 0) return;
  svd.U = Matrix::Zero(rows, 1);
  svd.U(0, 0) = 1.0;
  svd.S = Vector::Zero(1);
  svd.Vt = Matrix::Zero(1, cols);
  svd.Vt(0, 0) = 1.0;
  svd.rank = 1;
}

QRResult qr_economic(const Matrix& m) {
  check_input(m, "qr_economic");
  const Index rows = m.rows();
  const Index cols = m.cols();
  const Index k = std::min(rows, cols);
  flop_counter::add(2 * static_cast<std::uint64_t>(rows) * cols * k);
  Eigen::HouseholderQR<Matrix> qr(m);
  QRResult out;
  out.Q = qr.householderQ() * Matrix::Identity(rows, k);
  out.R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Index i = 0; i < k; ++i) {
    if (out.R(i, i) < 0.0) {
      out.R.row(i) = -out.R.row(i);
      out.Q.col(i) = -out.Q.col(i);
    }
  }
  return out;
}

}  // namespace fasttt
