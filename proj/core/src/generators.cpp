#include "fasttt/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "fasttt/errors.hpp"

namespace fasttt {

double Rng::uniform01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % n + 1) % n;
  std::uint64_t x = next();
  while (x > limit) x = next();
  return x % n;
}

namespace {

void check_density(double density) {
  if (!(density > 0.0 && density <= 1.0)) throw InputError("density must be in (0, 1]");
}

// `count` distinct values in [0, n), ascending.
std::vector<Index> sample_distinct(Index n, Index count, Rng& rng) {
  std::vector<Index> out;
  if (count >= n) {
    out.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i;
    return out;
  }
  std::unordered_set<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(count) * 2);
  for (Index j = n - count; j < n; ++j) {
    const Index t = static_cast<Index>(rng.below(static_cast<std::uint64_t>(j) + 1));
    chosen.insert(chosen.count(t) ? j : t);
  }
  out.assign(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SparseMatrix gen_fdm(Index n, Index m, Index k, FdmCoefficients coeffs, std::uint64_t seed) {
  if (n < 2 || m < 2 || k < 2) throw InputError("FDM grid dimensions must be >= 2");
  const Index N = n * m * k;
  Rng rng(seed);
  std::vector<Eigen::Triplet<double, Index>> trips;
  trips.reserve(static_cast<std::size_t>(7 * N));
  auto row_of = [&](Index x, Index y, Index z) { return (x * m + y) * k + z; };
  std::vector<Index> cols;
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < m; ++y) {
      for (Index z = 0; z < k; ++z) {
        const Index r = row_of(x, y, z);
        cols.clear();
        if (x > 0) cols.push_back(row_of(x - 1, y, z));
        if (y > 0) cols.push_back(row_of(x, y - 1, z));
        if (z > 0) cols.push_back(row_of(x, y, z - 1));
        cols.push_back(r);
        if (z + 1 < k) cols.push_back(row_of(x, y, z + 1));
        if (y + 1 < m) cols.push_back(row_of(x, y + 1, z));
        if (x + 1 < n) cols.push_back(row_of(x + 1, y, z));
        for (Index c : cols) {
          double v = c == r ? 6.0 : -1.0;
          if (coeffs == FdmCoefficients::Random) v = rng.uniform(-1.0, 1.0);
          trips.emplace_back(r, c, v);
        }
      }
    }
  }
  SparseMatrix a(N, N);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

SparseTensor gen_random_sparse(const Shape& shape, double density, std::uint64_t seed) {
  check_density(density);
  const Index count = static_cast<Index>(std::floor(density * static_cast<double>(shape.size())));
  Rng rng(seed);
  std::vector<Index> lin = sample_distinct(shape.size(), count, rng);
  std::vector<double> val(lin.size());
  for (double& v : val) v = rng.uniform01();
  return SparseTensor::from_linear(shape, std::move(lin), std::move(val));
}

SparseTensor gen_random_fibers(const Shape& shape, double density, std::size_t mode, std::uint64_t seed) {
  check_density(density);
  if (mode >= shape.order()) throw IndexError("fiber mode out of range");
  const Index n = shape[mode];
  const Index fibers_total = shape.size() / n;
  const Index count = static_cast<Index>(std::floor(density * static_cast<double>(shape.size()) / static_cast<double>(n)));
  Rng rng(seed);
  const std::vector<Index> picks = sample_distinct(fibers_total, count, rng);
  // A fiber key is the linear index with `mode` removed.
  const Index stride = shape.stride(mode);
  std::vector<Index> lin;
  lin.reserve(static_cast<std::size_t>(count * n));
  for (Index key : picks) {
    const Index high = key / stride;
    const Index low = key % stride;
    for (Index i = 0; i < n; ++i) lin.push_back((high * n + i) * stride + low);
  }
  std::sort(lin.begin(), lin.end());
  std::vector<double> val(lin.size());
  for (double& v : val) v = rng.uniform01();
  return SparseTensor::from_linear(shape, std::move(lin), std::move(val));
}

SparseMatrix gen_banded_symmetric(Index n, Index bandwidth, double density, std::uint64_t seed) {
  check_density(density);
  if (n < 1 || bandwidth < 1) throw InputError("banded matrix needs n >= 1 and bandwidth >= 1");
  Rng rng(seed);
  std::vector<Eigen::Triplet<double, Index>> trips;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j <= std::min(n - 1, i + bandwidth); ++j) {
      if (rng.uniform01() < density) {
        trips.emplace_back(i, j, 1.0);
        trips.emplace_back(j, i, 1.0);
      }
    }
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

}  // namespace fasttt
