#include "fasttt/fasttt.hpp"

#include <chrono>
#include <ctime>

#include "fasttt/errors.hpp"
#include "fasttt/ttsvd.hpp"

namespace fasttt {

namespace {

double now_wall() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

double now_cpu() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

}  // namespace

Stopwatch::Stopwatch() : wall0_(now_wall()), cpu0_(now_cpu()) {}
double Stopwatch::wall_seconds() const { return now_wall() - wall0_; }
double Stopwatch::cpu_seconds() const { return now_cpu() - cpu0_; }

bool DecompositionReport::contract_ok() const {
  if (mode == RoundingMode::FixedRank || !error) return true;
  return error->relative <= eps + 1e-12;
}

Decomposition fasttt(const SparseTensor& a, const FastTTOptions& options) {
  const Stopwatch clock;
  const Shape& shape = a.shape();
  const std::size_t d = shape.order();

  DecompositionReport rep;
  rep.method = "fasttt";
  rep.mode = options.mode;
  rep.eps = options.eps;
  if (options.mode != RoundingMode::FixedRank && !(options.eps > 0.0)) {
    rep.eps = kMinEps;
    rep.warnings.push_back("eps <= 0 raised to 1e-14");
  }
  if (options.mode == RoundingMode::FixedRank && options.fixed_ranks.empty()) {
    throw InputError("fixed-rank mode needs target ranks");
  }

  std::size_t p = 0;
  if (options.p) {
    p = *options.p;
    if (p >= d) throw IndexError("pivot " + std::to_string(p) + " out of range for order " + std::to_string(d));
  } else {
    p = select_p(a, options.fixed_ranks, options.precise_p, options.c_svd).p;
  }
  rep.p = p;

  if (a.empty()) {
    rep.warnings.push_back("input tensor has no nonzeros; returning the zero tensor train");
    TTTensor zero = TTTensor::zeros(shape);
    rep.R = 0;
    rep.ranks_tilde = zero.ranks();
    rep.ranks = zero.ranks();
    if (options.measure_error) rep.error = ErrorEstimate{};
    rep.wall_seconds = clock.wall_seconds();
    rep.cpu_seconds = clock.cpu_seconds();
    return {std::move(zero), std::move(rep)};
  }

  const StructuredTT s = build_structured_tt(a, p);
  const DeparallelisedTT dt = deparallelise(s);
  rep.R = s.R;
  rep.ranks_tilde = dt.ranks();
  const auto bound = rank_upper_bound(shape, p, s.R);
  for (std::size_t k = 0; k <= d; ++k) {
    if (rep.ranks_tilde[k] > bound[k]) {
      throw ContractViolation("deparallelised rank r~_" + std::to_string(k) + " = " +
                              std::to_string(rep.ranks_tilde[k]) + " exceeds its bound " + std::to_string(bound[k]));
    }
  }

  TruncationBudget budget;
  budget.eps = rep.eps;
  budget.p = p;
  budget.mode = options.mode;
  budget.fixed_ranks = options.fixed_ranks;
  TTTensor tt = round_deparallelised(dt, budget);
  rep.ranks = tt.ranks();
  rep.flops_fasttt = flops_fasttt(shape, p, rep.ranks_tilde, rep.ranks, options.c_svd);
  rep.flops_ttsvd = flops_ttsvd(shape, rep.ranks, options.c_svd);
  rep.wall_seconds = clock.wall_seconds();
  rep.cpu_seconds = clock.cpu_seconds();

  if (options.measure_error) {
    rep.error = measure_error(a, tt, options.error_param_cap);
    if (!rep.error->stable) rep.warnings.push_back("error measured with the inner-product identity only");
  }
  return {std::move(tt), std::move(rep)};
}

Decomposition ttsvd_decompose(const SparseTensor& a, double eps, bool measure, Index max_dense_entries) {
  const Stopwatch clock;
  DecompositionReport rep;
  rep.method = "ttsvd";
  rep.eps = eps;
  if (!(eps > 0.0)) {
    rep.eps = kMinEps;
    rep.warnings.push_back("eps <= 0 raised to 1e-14");
  }
  if (a.empty()) rep.warnings.push_back("input tensor has no nonzeros");
  TTTensor tt = tt_svd(a, rep.eps, max_dense_entries);
  rep.ranks = tt.ranks();
  rep.flops_ttsvd = flops_ttsvd(a.shape(), rep.ranks);
  rep.wall_seconds = clock.wall_seconds();
  rep.cpu_seconds = clock.cpu_seconds();
  if (measure) {
    rep.error = measure_error(a, tt);
    if (!rep.error->stable) rep.warnings.push_back("error measured with the inner-product identity only");
  }
  return {std::move(tt), std::move(rep)};
}

}  // namespace fasttt
