#include "fasttt/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "fasttt/errors.hpp"
#include "fasttt/matrix_kernels.hpp"

namespace fasttt {

std::string to_string(RoundingMode m) {
  switch (m) {
    case RoundingMode::Static: return "static";
    case RoundingMode::Dynamic: return "dynamic";
    case RoundingMode::FixedRank: return "fixed";
  }
  return "unknown";
}

RoundingMode parse_rounding_mode(const std::string& s) {
  if (s == "static") return RoundingMode::Static;
  if (s == "dynamic") return RoundingMode::Dynamic;
  if (s == "fixed") return RoundingMode::FixedRank;
  throw InputError("unknown rounding mode '" + s + "' (expected static, dynamic or fixed)");
}

double TruncationBudget::static_delta(double norm, std::size_t d) const {
  const double denom = std::sqrt(static_cast<double>(p)) + std::sqrt(static_cast<double>(d - 1 - p));
  return denom > 0.0 ? eps * norm / denom : 0.0;
}

std::pair<double, double> TruncationBudget::dynamic_budgets(double norm, std::size_t d) const {
  const double a = std::sqrt(static_cast<double>(d - 1 - p));
  const double b = std::sqrt(static_cast<double>(p));
  if (a + b == 0.0) return {0.0, 0.0};
  return {b / (a + b) * eps * norm, a / (a + b) * eps * norm};
}

Index TruncationBudget::target_rank(std::size_t k) const {
  if (fixed_ranks.empty()) throw ContractViolation("fixed-rank rounding without target ranks");
  const Index r = fixed_ranks.size() == 1 ? fixed_ranks[0] : fixed_ranks.at(k - 1);
  if (r < 1) throw ContractViolation("fixed-rank targets must be >= 1");
  return r;
}

namespace {

// Left unfolding (r_left * n) x r_right as a quasi-permutation.
struct LeftPerm {
  QuasiPermMatrix q;
  Index n;
};
// Transposed right unfolding (n * r_right) x r_left as a quasi-permutation.
struct RightPerm {
  QuasiPermMatrix q;
  Index n;
};
using Core = std::variant<TTCore, LeftPerm, RightPerm>;

TTCore materialize(const Core& c) {
  if (const auto* t = std::get_if<TTCore>(&c)) return *t;
  if (const auto* l = std::get_if<LeftPerm>(&c)) {
    TTCore out(l->q.rows() / l->n, l->n, l->q.cols());
    for (Index j = 0; j < l->q.cols(); ++j) out(l->q.row_of(j) / l->n, l->q.row_of(j) % l->n, j) = 1.0;
    return out;
  }
  const auto& r = std::get<RightPerm>(c);
  const Index rr = r.q.rows() / r.n;
  TTCore out(r.q.cols(), r.n, rr);
  for (Index j = 0; j < r.q.cols(); ++j) out(j, r.q.row_of(j) / rr, r.q.row_of(j) % rr) = 1.0;
  return out;
}

// m x_1 core: G'(a, i, c) = sum_j m(a, j) G(j, i, c).
TTCore merge_left(const Matrix& m, const Core& c) {
  if (const auto* r = std::get_if<RightPerm>(&c)) {
    const Index rr = r->q.rows() / r->n;
    TTCore out(m.rows(), r->n, rr);
    for (Index j = 0; j < r->q.cols(); ++j) {
      const Index i = r->q.row_of(j) / rr;
      const Index cc = r->q.row_of(j) % rr;
      for (Index a = 0; a < m.rows(); ++a) out(a, i, cc) += m(a, j);
    }
    return out;
  }
  return multiply_left(m, materialize(c));
}

// core x_3 m: G'(a, i, c) = sum_j G(a, i, j) m(j, c).
TTCore merge_right(const Core& c, const Matrix& m) {
  if (const auto* l = std::get_if<LeftPerm>(&c)) {
    TTCore out(l->q.rows() / l->n, l->n, m.cols());
    for (Index j = 0; j < l->q.cols(); ++j) {
      const Index a = l->q.row_of(j) / l->n;
      const Index i = l->q.row_of(j) % l->n;
      for (Index cc = 0; cc < m.cols(); ++cc) out(a, i, cc) += m(j, cc);
    }
    return out;
  }
  return multiply_right(materialize(c), m);
}

const TTCore& dense(const Core& c) { return std::get<TTCore>(c); }

TTTensor run_sweeps(std::vector<Core> cores, const TruncationBudget& b, double norm, RoundingTrace* trace) {
  const std::size_t d = cores.size();
  const std::size_t p = b.p;
  const double static_delta = b.static_delta(norm, d);
  auto [delta_left, delta_right] = b.dynamic_budgets(norm, d);
  if (trace) {
    trace->norm = norm;
    trace->steps.clear();
  }

  auto truncate = [&](const Matrix& g, std::size_t split, double dyn_delta) {
    double delta = 0.0;
    SVDResult svd;
    switch (b.mode) {
      case RoundingMode::Static:
        delta = static_delta;
        svd = svd_truncate_delta(g, delta);
        break;
      case RoundingMode::Dynamic:
        delta = dyn_delta;
        svd = svd_truncate_delta(g, delta);
        break;
      case RoundingMode::FixedRank:
        svd = svd_truncate_rank(g, b.target_rank(split));
        break;
    }
    promote_rank_zero(svd, g.rows(), g.cols());
    return std::pair{std::move(svd), delta};
  };
  auto record = [&](std::size_t split, double delta, double err, double budget) {
    if (trace) trace->steps.push_back({split, delta, err, budget});
  };

  // First SVD sweep, pivot towards the right edge.
  for (std::size_t k = p; k + 1 < d; ++k) {
    const TTCore& g = dense(cores[k]);
    const double dyn = delta_right / std::sqrt(static_cast<double>(d - 1 - k));
    auto [svd, delta] = truncate(g.left_unfolding(), k + 1, dyn);
    const Index rl = g.r_left();
    const Index n = g.n();
    cores[k + 1] = merge_left(svd.S.asDiagonal() * svd.Vt, cores[k + 1]);
    cores[k] = TTCore::from_left_unfolding(svd.U, rl, n);
    if (b.mode == RoundingMode::Dynamic) {
      delta_right = std::sqrt(std::max(0.0, delta_right * delta_right - svd.trunc_error * svd.trunc_error));
    }
    record(k + 1, delta, svd.trunc_error, delta_right);
  }

  // QR sweep back to the pivot.
  for (std::size_t k = d - 1; k > p; --k) {
    const TTCore& g = dense(cores[k]);
    QRResult qr = qr_economic(g.right_unfolding().transpose());
    const Index n = g.n();
    const Index rr = g.r_right();
    cores[k - 1] = merge_right(cores[k - 1], qr.R.transpose());
    cores[k] = TTCore::from_right_unfolding(qr.Q.transpose(), n, rr);
  }

  // Second SVD sweep, pivot towards the left edge.
  for (std::size_t k = p; k >= 1; --k) {
    const TTCore& g = dense(cores[k]);
    const double dyn = delta_left / std::sqrt(static_cast<double>(k));
    auto [svd, delta] = truncate(g.right_unfolding().transpose(), k, dyn);
    const Index n = g.n();
    const Index rr = g.r_right();
    cores[k - 1] = merge_right(cores[k - 1], svd.Vt.transpose() * svd.S.asDiagonal());
    cores[k] = TTCore::from_right_unfolding(svd.U.transpose(), n, rr);
    if (b.mode == RoundingMode::Dynamic) {
      delta_left = std::sqrt(std::max(0.0, delta_left * delta_left - svd.trunc_error * svd.trunc_error));
    }
    record(k, delta, svd.trunc_error, delta_left);
  }

  std::vector<TTCore> out;
  out.reserve(d);
  for (auto& c : cores) out.push_back(materialize(c));
  return TTTensor(std::move(out));
}

void check_pivot(const TTTensor& t, std::size_t p) {
  if (p >= t.order()) {
    throw ContractViolation("pivot " + std::to_string(p) + " out of range for order " + std::to_string(t.order()));
  }
  constexpr double kTol = 1e-12;
  for (std::size_t k = 0; k < t.order(); ++k) {
    double defect = 0.0;
    if (k < p) defect = left_orthogonality_defect(t.core(k));
    if (k > p) defect = right_orthogonality_defect(t.core(k));
    if (defect > kTol) {
      throw ContractViolation("core " + std::to_string(k) + " is not orthonormal with respect to pivot " +
                              std::to_string(p) + " (defect " + std::to_string(defect) +
                              "); the tensor train was built for a different pivot");
    }
  }
}

TTTensor round_dense(const TTTensor& t, const TruncationBudget& b, RoundingTrace* trace) {
  check_pivot(t, b.p);
  std::vector<Core> cores(t.cores().begin(), t.cores().end());
  return run_sweeps(std::move(cores), b, t.core(b.p).norm(), trace);
}

}  // namespace

TTTensor efficient_tt_rounding(const TTTensor& t, const TruncationBudget& budget, RoundingTrace* trace) {
  if (budget.mode != RoundingMode::Static) throw ContractViolation("efficient_tt_rounding needs a static budget");
  return round_dense(t, budget, trace);
}

TTTensor dynamic_tt_rounding(const TTTensor& t, const TruncationBudget& budget, RoundingTrace* trace) {
  if (budget.mode != RoundingMode::Dynamic) throw ContractViolation("dynamic_tt_rounding needs a dynamic budget");
  return round_dense(t, budget, trace);
}

TTTensor fixed_rank_rounding(const TTTensor& t, std::span<const Index> target_ranks, std::size_t p,
                             RoundingTrace* trace) {
  TruncationBudget b;
  b.p = p;
  b.mode = RoundingMode::FixedRank;
  b.fixed_ranks.assign(target_ranks.begin(), target_ranks.end());
  if (b.fixed_ranks.size() != 1 && b.fixed_ranks.size() + 1 != t.order()) {
    throw ContractViolation("fixed-rank rounding needs one target or d-1 targets");
  }
  return round_dense(t, b, trace);
}

TTTensor round_deparallelised(const DeparallelisedTT& t, const TruncationBudget& budget, RoundingTrace* trace) {
  if (budget.p != t.p) {
    throw ContractViolation("rounding pivot " + std::to_string(budget.p) + " differs from construction pivot " +
                            std::to_string(t.p));
  }
  std::vector<Core> cores;
  cores.reserve(t.order());
  for (std::size_t k = 0; k < t.p; ++k) cores.emplace_back(LeftPerm{t.left[k], t.shape[k]});
  cores.emplace_back(t.pivot);
  for (std::size_t k = t.p + 1; k < t.order(); ++k) cores.emplace_back(RightPerm{t.right[k - t.p - 1], t.shape[k]});
  return run_sweeps(std::move(cores), budget, t.pivot.norm(), trace);
}

}  // namespace fasttt
