#include <benchmark/benchmark.h>

#include "probdist/landscapes.hpp"
#include "probdist/measures.hpp"

namespace pd = probdist;

namespace {

void BM_GridScan(benchmark::State& state) {
  const auto kind = state.range(0) == 0 ? pd::LandscapeDistance::kW1 : pd::LandscapeDistance::kEnergySq;
  const auto q = pd::standard_measure(pd::TwoAtom{Eigen::Vector2d(2.0, 2.0)});
  const auto axis = pd::grid_axis(-1.0, 1.0, 0.05);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pd::grid_scan(pd::TwoAtomFamily{}, q, kind, axis, axis));
  }
}
BENCHMARK(BM_GridScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DisplacementProbe(benchmark::State& state) {
  pd::DisplacementProbeConfig config;
  config.angle0 = 0.2;
  config.angle1 = 1.0;
  config.segment_points = static_cast<int>(state.range(0));
  config.circle_points = 4 * config.segment_points;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pd::displacement_convexity_probe(config));
  }
}
BENCHMARK(BM_DisplacementProbe)->RangeMultiplier(2)->Range(32, 128)->Unit(benchmark::kMillisecond);

}  // namespace
