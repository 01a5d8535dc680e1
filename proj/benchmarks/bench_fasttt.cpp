#include <benchmark/benchmark.h>

#include "fasttt/depar.hpp"
#include "fasttt/fasttt.hpp"
#include "fasttt/generators.hpp"
#include "fasttt/quasi_perm.hpp"
#include "fasttt/tt_matrix.hpp"

using namespace fasttt;

namespace {

SparseTensor fdm_tensor(Index g) {
  const std::vector<Index> dims{g, g, g};
  return tensorize_matrix(gen_fdm(g, g, g, FdmCoefficients::Random, 1), dims, dims);
}

// Each column gets a single unit entry in a random row.
QuasiPermMatrix random_map(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Index> to(static_cast<std::size_t>(cols));
  for (auto& r : to) r = static_cast<Index>(rng.below(static_cast<std::uint64_t>(rows)));
  return QuasiPermMatrix(rows, std::move(to));
}

void BM_FastTT_Fdm(benchmark::State& state) {
  const SparseTensor a = fdm_tensor(state.range(0));
  FastTTOptions o;
  o.measure_error = false;
  for (auto _ : state) benchmark::DoNotOptimize(fasttt::fasttt(a, o));
}
BENCHMARK(BM_FastTT_Fdm)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_TTSvd_Fdm(benchmark::State& state) {
  const SparseTensor a = fdm_tensor(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ttsvd_decompose(a, kMinEps, false));
}
BENCHMARK(BM_TTSvd_Fdm)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_FastTT_RandomSparse(benchmark::State& state) {
  const SparseTensor a = gen_random_sparse(Shape{20, 20, 20, 20}, 1e-3 * static_cast<double>(state.range(0)), 7);
  FastTTOptions o;
  o.eps = 0.1;
  o.measure_error = false;
  for (auto _ : state) benchmark::DoNotOptimize(fasttt::fasttt(a, o));
}
BENCHMARK(BM_FastTT_RandomSparse)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_DeparQuasiPerm(benchmark::State& state) {
  const QuasiPermMatrix q = random_map(state.range(0), 20 * state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(depar_quasi_perm(q));
}
BENCHMARK(BM_DeparQuasiPerm)->Arg(100)->Arg(1000);

void BM_DeparGeneral(benchmark::State& state) {
  const Matrix m = random_map(state.range(0), 20 * state.range(0), 3).to_dense();
  for (auto _ : state) benchmark::DoNotOptimize(depar_general(m));
}
BENCHMARK(BM_DeparGeneral)->Arg(100)->Arg(300);

}  // namespace

BENCHMARK_MAIN();
