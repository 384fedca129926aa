#include <benchmark/benchmark.h>

#include "mpsketch/bitstream.hpp"
#include "mpsketch/fp_high.hpp"
#include "mpsketch/fp_low.hpp"
#include "mpsketch/harness/datagen.hpp"
#include "mpsketch/rounded_aggregate.hpp"
#include "mpsketch/rounding.hpp"

namespace {

using namespace mpsketch;

void BM_RoundAndEncode(benchmark::State& state) {
  RoundingParams params;
  params.gamma = 1e-3;
  params.exponent_min = -100000;
  params.exponent_max = 100000;
  Rng rng(1);
  double r = 12345.678;
  for (auto _ : state) {
    BitWriter out;
    encode_bits(round_stochastic(r, params, rng), out);
    benchmark::DoNotOptimize(out);
    r = r * 1.0001 + 0.5;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RoundAndEncode);

// Arguments: depth d of a line with 2d + 1 vertices, bundle width.
void BM_RoundedConvergecastLine(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto width = static_cast<std::size_t>(state.range(1));
  const SpanningTree tree = center_tree(line(2 * d + 1));
  std::vector<std::vector<double>> local(tree.vertex_count(),
                                         std::vector<double>(width));
  Rng fill(2);
  for (auto& v : local) {
    for (double& x : v) x = fill.uniform() * 100.0 - 50.0;
  }
  AggregateOptions opt;
  opt.rounding = gamma_for(0.25, 0.25, d, 1000.0, static_cast<double>(2 * d + 1));
  opt.log_k = log_truncation_k(opt.rounding.gamma, 1000.0,
                               static_cast<double>(2 * d + 1), 1.0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    opt.seed = ++seed;
    benchmark::DoNotOptimize(rounded_convergecast(tree, local, width, opt));
  }
}
BENCHMARK(BM_RoundedConvergecastLine)
    ->Args({4, 256})
    ->Args({64, 256})
    ->Unit(benchmark::kMillisecond);

VectorInputs zipf_inputs(std::size_t n, std::size_t m) {
  using namespace mpsketch::harness;
  const auto agg = generate_aggregate(parse_dist("zipf:1.1"), n, 10000, 7);
  return split_among_players(agg, m, 7);
}

void BM_FpHighStar(benchmark::State& state) {
  const VectorInputs in = zipf_inputs(1000, 64);
  const SpanningTree tree = center_tree(star(64));
  FpHighConfig cfg;
  cfg.p = 1.5;
  cfg.eps = 0.1;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_fp_high(in, tree, cfg, ++seed));
}
BENCHMARK(BM_FpHighStar)->Unit(benchmark::kMillisecond);

void BM_FpLowLine(benchmark::State& state) {
  const VectorInputs in = zipf_inputs(1000, 32);
  const SpanningTree tree = center_tree(line(32));
  FpLowConfig cfg;
  cfg.p = 0.5;
  cfg.eps = 0.15;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_fp_low(in, tree, cfg, ++seed));
}
BENCHMARK(BM_FpLowLine)->Unit(benchmark::kMillisecond);

}  // namespace
