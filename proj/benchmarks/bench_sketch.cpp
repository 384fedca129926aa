#include <benchmark/benchmark.h>

#include "mpsketch/heavy_hitters.hpp"
#include "mpsketch/rng.hpp"
#include "mpsketch/stable_dist.hpp"

namespace {

using namespace mpsketch;

// Argument: p * 100.
void BM_SampleSymmetricStable(benchmark::State& state) {
  const double p = static_cast<double>(state.range(0)) / 100.0;
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_symmetric_stable(p, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleSymmetricStable)->Arg(25)->Arg(50)->Arg(100)->Arg(150)->Arg(200);

void BM_SampleSkewedCauchy(benchmark::State& state) {
  StableParams law;
  law.p = 1.0;
  law.beta = -1.0;
  law.scale = 1.5707963267948966;
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(sample_stable(law, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleSkewedCauchy);

// Arguments: rows k, columns n.
void BM_BuildSketch(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_sketch(k, n, 1.5, kDefaultEta, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(k * n));
}
BENCHMARK(BM_BuildSketch)->Args({200, 1000})->Args({1800, 1000})->Unit(benchmark::kMillisecond);

void BM_CountSketchTable(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CountSketchSpec spec(n, 0.25, 3);
  std::vector<std::uint64_t> dense(n);
  for (std::size_t i = 0; i < n; ++i) dense[i] = 1 + i % 7;
  const SparseVector x = SparseVector::from_dense(dense);
  for (auto _ : state) benchmark::DoNotOptimize(count_sketch_table(spec, x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_CountSketchTable)->Arg(1000)->Arg(10000);

}  // namespace
