#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "radialft/transform.hpp"

using namespace radialft;

namespace {

std::vector<double> radii(int count) {
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(0.5 * std::pow(100.0, i / double(count - 1)));
  return g;
}

transform::TransformRequest request() { return {profiles::RadialProfile::example1(2.0, 2.5), 3, 0.75}; }

void BM_Eq6Parallel(benchmark::State& state) {
  const auto req = request();
  const auto r = radii(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(transform::forward_eq6_grid(req, r));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Eq6Serial(benchmark::State& state) {
  const auto req = request();
  const auto r = radii(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(transform::forward_eq6_grid_serial(req, r));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DirectGrid(benchmark::State& state) {
  const auto p = request().profile;
  const auto r = radii(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(transform::forward_direct_grid(p, 3, r));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SineSweep(benchmark::State& state) {
  const auto count = static_cast<int>(state.range(0));
  auto f = [](double t) { return (1.0 - t * t) * (1.0 - t * t); };
  for (auto _ : state)
    benchmark::DoNotOptimize(transform::sine_transform_uniform(f, 0.0, 1.0, {}, 0.0, 1.0, 0.25, count));
  state.SetItemsProcessed(state.iterations() * count);
}

}  // namespace

BENCHMARK(BM_Eq6Parallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Eq6Serial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DirectGrid)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SineSweep)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
