#include <benchmark/benchmark.h>

#include "mpsketch/morris.hpp"
#include "mpsketch/rng.hpp"

namespace {

using namespace mpsketch;

void BM_MorrisIncrement(benchmark::State& state) {
  Rng rng(1);
  MorrisCounter c(1.05);
  for (auto _ : state) {
    c.increment(rng);
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MorrisIncrement);

// Argument: batch size; base 1 + 0.0025 as in the low-p protocol.
void BM_MorrisAddBatch(benchmark::State& state) {
  const auto u = static_cast<std::uint64_t>(state.range(0));
  Rng rng(2);
  for (auto _ : state) {
    MorrisCounter c(1.0025);
    c.add_batch(u, rng);
    benchmark::DoNotOptimize(c.value());
  }
}
BENCHMARK(BM_MorrisAddBatch)->Arg(1000)->Arg(1000000)->Arg(1000000000);

void BM_MorrisMerge(benchmark::State& state) {
  const auto u = static_cast<std::uint64_t>(state.range(0));
  Rng rng(3);
  MorrisCounter x(1.0025), y(1.0025);
  x.add_batch(u, rng);
  y.add_batch(u, rng);
  for (auto _ : state) benchmark::DoNotOptimize(merge(x, y, rng).value());
}
BENCHMARK(BM_MorrisMerge)->Arg(1000)->Arg(1000000)->Arg(1000000000);

void BM_StreamingMorrisUnitAdds(benchmark::State& state) {
  Rng rng(4);
  StreamingMorris s(1.0025);
  for (auto _ : state) {
    s.add(1, rng);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StreamingMorrisUnitAdds);

}  // namespace
