#include "fasttt/structured_tt.hpp"

#include <string>

#include "fasttt/errors.hpp"

namespace fasttt {

std::vector<Index> StructuredTT::ranks() const {
  std::vector<Index> r(order() + 1, R);
  r.front() = 1;
  r.back() = 1;
  return r;
}

StructuredTT build_structured_tt(const SparseTensor& a, std::size_t p) {
  const std::size_t d = a.order();
  if (p >= d) throw IndexError("pivot mode " + std::to_string(p) + " out of range for order " + std::to_string(d));
  const FiberSet fs = extract_nonzero_fibers(a, p);
  const Shape& shape = a.shape();

  StructuredTT s;
  s.shape = shape;
  s.p = p;
  s.zero = fs.count() == 0;
  s.R = s.zero ? 1 : static_cast<Index>(fs.count());
  const Index R = s.R;

  auto coord = [&](std::size_t j, std::size_t k) -> Index { return s.zero ? 0 : fs.fixed_coordinate(j, k); };

  for (std::size_t k = 0; k < p; ++k) {
    const Index n = shape[k];
    std::vector<Index> map(static_cast<std::size_t>(R));
    for (Index j = 0; j < R; ++j) {
      const Index i = coord(static_cast<std::size_t>(j), k);
      map[static_cast<std::size_t>(j)] = k == 0 ? i : j * n + i;
    }
    s.left.emplace_back(k == 0 ? n : R * n, std::move(map));
  }
  for (std::size_t k = p + 1; k < d; ++k) {
    const Index n = shape[k];
    const bool last = k + 1 == d;
    std::vector<Index> map(static_cast<std::size_t>(R));
    for (Index j = 0; j < R; ++j) {
      const Index i = coord(static_cast<std::size_t>(j), k);
      map[static_cast<std::size_t>(j)] = last ? i : i * R + j;
    }
    s.right.emplace_back(last ? n : n * R, std::move(map));
  }

  s.fibers = SparseMatrix(R, shape[p]);
  if (!s.zero) {
    std::vector<Eigen::Triplet<double, Index>> trips;
    trips.reserve(fs.values.size());
    for (std::size_t j = 0; j < fs.count(); ++j) {
      for (Index e = fs.offsets[j]; e < fs.offsets[j + 1]; ++e) {
        trips.emplace_back(static_cast<Index>(j), fs.positions[static_cast<std::size_t>(e)],
                           fs.values[static_cast<std::size_t>(e)]);
      }
    }
    s.fibers.setFromTriplets(trips.begin(), trips.end());
  }
  s.fibers.makeCompressed();
  return s;
}

TTTensor structured_to_tt(const StructuredTT& s, Index max_entries) {
  const std::size_t d = s.order();
  const auto r = s.ranks();
  Index total = 0;
  for (std::size_t k = 0; k < d; ++k) {
    Index dims[] = {r[k], s.shape[k], r[k + 1]};
    total += checked_product(dims);
    if (total > max_entries) {
      throw SizeLimitError("structured_to_tt: dense cores exceed cap of " + std::to_string(max_entries) + " entries");
    }
  }

  std::vector<TTCore> cores;
  cores.reserve(d);
  for (std::size_t k = 0; k < s.p; ++k) {
    const Index n = s.shape[k];
    TTCore c(r[k], n, r[k + 1]);
    const auto& q = s.left[k];
    for (Index j = 0; j < q.cols(); ++j) c(q.row_of(j) / n, q.row_of(j) % n, j) = 1.0;
    cores.push_back(std::move(c));
  }
  {
    const std::size_t p = s.p;
    TTCore c(r[p], s.shape[p], r[p + 1]);
    const bool first = p == 0;
    const bool last = p + 1 == d;
    for (Index j = 0; j < s.fibers.outerSize(); ++j) {
      for (SparseMatrix::InnerIterator it(s.fibers, j); it; ++it) {
        c(first ? 0 : j, it.col(), last ? 0 : j) += it.value();
      }
    }
    cores.push_back(std::move(c));
  }
  for (std::size_t k = s.p + 1; k < d; ++k) {
    const Index rr = r[k + 1];
    TTCore c(r[k], s.shape[k], rr);
    const auto& q = s.right[k - s.p - 1];
    for (Index j = 0; j < q.cols(); ++j) c(j, q.row_of(j) / rr, q.row_of(j) % rr) = 1.0;
    cores.push_back(std::move(c));
  }
  return TTTensor(std::move(cores));
}

std::optional<QuasiPermMatrix> recognize_left_perm_core(const TTCore& c) {
  return QuasiPermMatrix::recognize(c.left_unfolding());
}

std::optional<QuasiPermMatrix> recognize_right_perm_core(const TTCore& c) {
  return QuasiPermMatrix::recognize(c.right_unfolding().transpose());
}

}  // namespace fasttt
