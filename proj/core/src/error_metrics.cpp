#include "fasttt/error_metrics.hpp"

#include <cmath>
#include <limits>

#include "fasttt/depar.hpp"
#include "fasttt/structured_tt.hpp"

namespace fasttt {

namespace {

double relative(double err, double norm_a) { return norm_a > 0.0 ? err / norm_a : err; }

struct PivotChoice {
  std::size_t p = 0;
  Index params = 0;
  std::vector<Index> ranks;
};

PivotChoice cheapest_exact_pivot(const SparseTensor& a) {
  const std::size_t d = a.order();
  std::size_t best_p = 0;
  Index best_params = std::numeric_limits<Index>::max();
  for (std::size_t p = 0; p < d; ++p) {
    const auto r = depar_ranks(build_structured_tt(a, p));
    Index params = 0;
    for (std::size_t k = 0; k < d; ++k) params += r[k] * a.shape()[k] * r[k + 1];
    if (params < best_params) {
      best_params = params;
      best_p = p;
    }
  }
  return {best_p, best_params, depar_ranks(build_structured_tt(a, best_p))};
}

}  // namespace

TTTensor exact_tt(const SparseTensor& a) {
  return parallel_vector_round(build_structured_tt(a, cheapest_exact_pivot(a).p));
}

double relative_error_identity(const SparseTensor& a, const TTTensor& b) {
  const double na = frobenius_norm(a);
  const double nb = tt_norm(b);
  const double ab = tt_inner(a, b);
  const double e2 = na * na - 2.0 * ab + nb * nb;
  return relative(std::sqrt(std::max(0.0, e2)), na);
}

ErrorEstimate measure_error(const SparseTensor& a, const TTTensor& b, Index max_params) {
  ErrorEstimate out;
  out.norm_a = frobenius_norm(a);
  out.norm_b = tt_norm(b);
  const double ab = tt_inner(a, b);
  const double e2 = out.norm_a * out.norm_a - 2.0 * ab + out.norm_b * out.norm_b;
  out.relative_identity = relative(std::sqrt(std::max(0.0, e2)), out.norm_a);
  if (a.empty()) {
    out.relative = out.norm_b;
    return out;
  }
  const PivotChoice pc = cheapest_exact_pivot(a);
  const auto rb = b.ranks();
  Index params = 0;
  for (std::size_t k = 0; k < a.order(); ++k) {
    const Index rl = k == 0 ? 1 : pc.ranks[k] + rb[k];
    const Index rr = k + 1 == a.order() ? 1 : pc.ranks[k + 1] + rb[k + 1];
    params += rl * a.shape()[k] * rr;
  }
  if (params > max_params) {
    out.relative = out.relative_identity;
    out.stable = false;
    return out;
  }
  const TTTensor exact = parallel_vector_round(build_structured_tt(a, pc.p));
  out.relative = relative(tt_norm(tt_add(exact, tt_scale(b, -1.0))), out.norm_a);
  return out;
}

}  // namespace fasttt
