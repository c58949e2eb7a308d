#include <benchmark/benchmark.h>

#include "probdist/measures.hpp"
#include "probdist/rng.hpp"
#include "probdist/transport.hpp"

namespace pd = probdist;

namespace {

pd::DiscreteMeasure gaussian_cloud(int dim, int n, std::uint64_t stream) {
  pd::RngStream rng(7, stream);
  pd::PointSet atoms(dim, n);
  for (int j = 0; j < n; ++j) {
    for (int r = 0; r < dim; ++r) atoms(r, j) = rng.normal();
  }
  return pd::DiscreteMeasure::uniform(std::move(atoms));
}

void BM_ExactW1(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto q = gaussian_cloud(4, n, 1);
  const auto p = gaussian_cloud(4, n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pd::wasserstein(q, p, pd::GroundMetric::euclidean(), 1.0));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_ExactW1)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond)->Complexity();

void BM_ExactW2WithPotentials(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto q = gaussian_cloud(2, n, 3);
  const auto p = gaussian_cloud(2, n, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pd::solve_exact_ot(q, p, pd::GroundMetric::euclidean(), 2.0));
  }
}
BENCHMARK(BM_ExactW2WithPotentials)->RangeMultiplier(4)->Range(16, 256)->Unit(benchmark::kMillisecond);

void BM_AssignmentOracle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto q = gaussian_cloud(2, n, 5);
  const auto p = gaussian_cloud(2, n, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pd::assignment_oracle(q, p, pd::GroundMetric::euclidean(), 1.0));
  }
}
BENCHMARK(BM_AssignmentOracle)->DenseRange(4, 7)->Unit(benchmark::kMicrosecond);

}  // namespace
