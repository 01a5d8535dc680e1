#include "fasttt/flops.hpp"

#include <algorithm>

#include "fasttt/depar.hpp"
#include "fasttt/errors.hpp"
#include "fasttt/structured_tt.hpp"
#include "fasttt/ttsvd.hpp"

namespace fasttt {

std::vector<Index> rank_upper_bound(const Shape& shape, std::size_t p, Index R) {
  const std::size_t d = shape.order();
  if (p >= d) throw IndexError("pivot out of range");
  std::vector<Index> r(d + 1, 1);
  for (std::size_t k = 1; k < d; ++k) {
    const Index structural = k <= p ? shape.prefix_size(k) : shape.suffix_size(k);
    r[k] = std::min(R, structural);
  }
  return r;
}

double flops_fasttt(const Shape& shape, std::size_t p, std::span<const Index> rt, std::span<const Index> r,
                    double c_svd) {
  const std::size_t d = shape.order();
  if (rt.size() != d + 1 || r.size() != d + 1) throw ShapeError("flops_fasttt: expected rank vectors r_0..r_d");
  if (p >= d) throw IndexError("pivot out of range");
  auto n = [&](std::size_t k) { return static_cast<double>(shape[k]); };
  auto v = [](Index x) { return static_cast<double>(x); };
  // Pivot SVD, then the right sweep over splits p+2..d-1, then the left sweep
  // over splits 1..p (splits counted 1-based as in r_k).
  double total = svd_flops(v(rt[p]) * n(p), v(rt[p + 1]), c_svd);
  for (std::size_t k = p + 1; k + 1 < d; ++k) total += svd_flops(v(r[k]) * n(k), v(rt[k + 1]), c_svd);
  for (std::size_t k = 1; k <= p; ++k) total += svd_flops(v(rt[k]), n(k) * v(r[k + 1]), c_svd);
  return total;
}

PSelection select_p(const SparseTensor& a, std::span<const Index> target_ranks, bool precise, double c_svd) {
  const Shape& shape = a.shape();
  const std::size_t d = shape.order();
  if (!target_ranks.empty() && target_ranks.size() != 1 && target_ranks.size() + 1 != d) {
    throw ShapeError("select_p: need one target rank or d-1 of them");
  }
  PSelection out;
  double best = 0.0;
  for (std::size_t p = 0; p < d; ++p) {
    const Index R = std::max<Index>(1, static_cast<Index>(count_nonzero_fibers(a, p)));
    std::vector<Index> rt = precise ? depar_ranks(build_structured_tt(a, p)) : rank_upper_bound(shape, p, R);
    std::vector<Index> r = rt;
    for (std::size_t k = 1; k < d; ++k) {
      Index want = rt[k];
      if (!target_ranks.empty()) want = target_ranks.size() == 1 ? target_ranks[0] : target_ranks[k - 1];
      r[k] = std::min({want, rt[k], shape.prefix_size(k), shape.suffix_size(k)});
    }
    const double f = flops_fasttt(shape, p, rt, r, c_svd);
    out.estimates.push_back(f);
    out.fiber_counts.push_back(R);
    if (p == 0 || f < best) {
      best = f;
      out.p = p;
    }
  }
  return out;
}

}  // namespace fasttt
