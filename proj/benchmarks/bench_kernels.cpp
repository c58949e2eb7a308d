#include <benchmark/benchmark.h>

#include "probdist/kernels.hpp"
#include "probdist/measures.hpp"
#include "probdist/rng.hpp"

namespace pd = probdist;

namespace {

pd::DiscreteMeasure sphere_sample(int dim, int n, std::uint64_t stream) {
  pd::RngStream rng(11, stream);
  return pd::sample_measure(pd::UniformSphere{dim}, n, rng);
}

void BM_EnergyDistanceSq(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto q = sphere_sample(8, n, 1);
  const auto p = sphere_sample(8, n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pd::energy_distance_sq(q, p, pd::GroundMetric::euclidean()));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_EnergyDistanceSq)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond)->Complexity();

void BM_TriangularGapGram(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto q = sphere_sample(8, n, 3);
  const pd::Point origin = pd::Point::Zero(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pd::triangular_gap_gram(pd::GroundMetric::euclidean(), q.atoms(), origin));
  }
}
BENCHMARK(BM_TriangularGapGram)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);

}  // namespace
