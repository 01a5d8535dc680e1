#pragma once

#include <cstdint>
#include <random>

#include "fasttt/matrix_types.hpp"
#include "fasttt/tensor.hpp"

namespace fasttt {

/// Seeded PRNG shared by every generator: std::mt19937_64 seeded with the
/// 64-bit seed directly. Doubles use the top 53 bits; integers use rejection
/// so every platform draws the same sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in (0, 1): ((x >> 11) + 0.5) * 2^-53.
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

enum class FdmCoefficients { Laplacian, Random };

/// 7-point stencil on an n x m x k grid. Grid point (x, y, z) is row
/// (x * m + y) * k + z. Laplacian: 6 on the diagonal and -1 for each grid
/// neighbour. Random: same pattern with uniform(-1, 1) values drawn in row
/// order, columns ascending.
SparseMatrix gen_fdm(Index n, Index m, Index k, FdmCoefficients coeffs, std::uint64_t seed = 0);

/// floor(density * size) distinct coordinates drawn uniformly (Floyd's
/// sampling), values uniform(0, 1) assigned in ascending linear order.
SparseTensor gen_random_sparse(const Shape& shape, double density, std::uint64_t seed);

/// Like gen_random_sparse, but whole fibers along `mode` are nonzero, as
/// when colour pixels are observed together: floor(density * size / n_mode)
/// fibers.
SparseTensor gen_random_fibers(const Shape& shape, double density, std::size_t mode, std::uint64_t seed);

/// Symmetric n x n matrix whose off-diagonal pairs within `bandwidth` of the
/// diagonal are present with probability `density` and value 1; diagonal
/// zero. Resembles a locally ordered graph adjacency matrix.
SparseMatrix gen_banded_symmetric(Index n, Index bandwidth, double density, std::uint64_t seed);

}  // namespace fasttt
