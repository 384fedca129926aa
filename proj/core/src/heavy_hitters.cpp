#include "mpsketch/heavy_hitters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpsketch/errors.hpp"
#include "mpsketch/rng.hpp"
#include "mpsketch/stats.hpp"

namespace mpsketch {

std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) noexcept {
  const uint128 prod = static_cast<uint128>(a) * b;
  std::uint64_t r = static_cast<std::uint64_t>(prod & kMersenne61) +
                    static_cast<std::uint64_t>(prod >> 61);
  if (r >= kMersenne61) r -= kMersenne61;
  return r;
}

namespace {

std::uint64_t addmod61(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t r = a + b;
  if (r >= kMersenne61) r -= kMersenne61;
  return r;
}

std::uint64_t field_element(Rng& rng, bool nonzero) {
  for (;;) {
    const std::uint64_t v = rng() >> 3;  // 61 bits
    if (v < kMersenne61 && (!nonzero || v != 0)) return v;
  }
}

}  // namespace

CountSketchSpec::CountSketchSpec(std::size_t n, double eps, std::uint64_t seed,
                                 double c_rows)
    : n_(n), seed_(seed) {
  if (n == 0) throw ParameterError("count-sketch needs n >= 1");
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ParameterError("count-sketch needs eps in (0, 1)");
  }
  if (!(c_rows > 0.0)) throw ParameterError("c_rows must be positive");
  rows_ = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(c_rows * std::log2(static_cast<double>(n)))));
  width_ = static_cast<std::size_t>(std::ceil(6.0 / (eps * eps)));
  hashes_.resize(rows_);
  for (std::size_t j = 0; j < rows_; ++j) {
    Rng rng(derive_seed(seed, {stream_tag::kHash, j}));
    RowHash& h = hashes_[j];
    h.a = field_element(rng, true);
    h.b = field_element(rng, false);
    for (auto& c : h.c) c = field_element(rng, false);
  }
}

std::size_t CountSketchSpec::bucket(std::size_t row,
                                    std::uint64_t x) const noexcept {
  const RowHash& h = hashes_[row];
  const std::uint64_t v = addmod61(mulmod61(h.a, x % kMersenne61), h.b);
  return static_cast<std::size_t>(v % width_);
}

int CountSketchSpec::sign(std::size_t row, std::uint64_t x) const noexcept {
  const RowHash& h = hashes_[row];
  const std::uint64_t xm = x % kMersenne61;
  std::uint64_t v = h.c[3];
  for (int d = 2; d >= 0; --d) v = addmod61(mulmod61(v, xm), h.c[d]);
  return (v & 1U) != 0 ? 1 : -1;
}

std::vector<double> count_sketch_table(const CountSketchSpec& spec,
                                       const SparseVector& x) {
  std::vector<double> table(spec.cells(), 0.0);
  for (std::size_t t = 0; t < x.nnz(); ++t) {
    const std::uint64_t item = x.index[t];
    const double value = static_cast<double>(x.value[t]);
    for (std::size_t j = 0; j < spec.rows(); ++j) {
      table[j * spec.width() + spec.bucket(j, item)] +=
          spec.sign(j, item) * value;
    }
  }
  return table;
}

std::vector<double> count_sketch_estimates(const CountSketchSpec& spec,
                                           const std::vector<double>& table) {
  if (table.size() != spec.cells()) {
    throw ParameterError("count-sketch table has the wrong size");
  }
  std::vector<double> est(spec.dim());
  std::vector<double> votes(spec.rows());
  for (std::size_t x = 0; x < spec.dim(); ++x) {
    for (std::size_t j = 0; j < spec.rows(); ++j) {
      votes[j] = spec.sign(j, x) * table[j * spec.width() + spec.bucket(j, x)];
    }
    est[x] = symmetric_median(votes);
  }
  return est;
}

CountSketchSpec hh_sketch_spec(std::size_t n, const HeavyHitterConfig& cfg,
                               std::uint64_t seed) {
  return CountSketchSpec(n, cfg.eps, derive_seed(seed, {stream_tag::kHash}),
                         cfg.c_rows);
}

PointEstimates point_estimate_all(const VectorInputs& inputs,
                                  const SpanningTree& tree,
                                  const HeavyHitterConfig& cfg,
                                  std::uint64_t seed) {
  const std::size_t n = common_dim(inputs);
  if (inputs.size() != tree.vertex_count()) {
    throw ParameterError("one input per vertex is required");
  }
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    throw ParameterError("heavy hitters need delta in (0, 1)");
  }
  const CountSketchSpec spec = hh_sketch_spec(n, cfg, seed);

  std::vector<std::vector<double>> local(inputs.size());
  for (std::size_t v = 0; v < inputs.size(); ++v) {
    inputs[v].validate();
    if (!inputs[v].empty()) local[v] = count_sketch_table(spec, inputs[v]);
  }

  PointEstimates out;
  out.cells = spec.cells();
  const double m = static_cast<double>(tree.vertex_count());
  const double max_in = static_cast<double>(max_entry(inputs));
  out.rounding = gamma_for(cfg.eps, cfg.delta, tree.depth,
                           static_cast<double>(n), m, cfg.c_exponent, max_in);
  AggregateOptions options;
  options.codec = cfg.codec;
  options.rounding = out.rounding;
  options.log_k = log_truncation_k(out.rounding.gamma, static_cast<double>(n),
                                   m, max_in);
  options.seed = derive_seed(seed, {stream_tag::kRounding});
  AggregateResult agg = rounded_convergecast(tree, local, spec.cells(), options);
  out.estimates = count_sketch_estimates(spec, agg.root);
  out.stats = std::move(agg.stats);
  out.max_message_bits = agg.max_message_bits;
  return out;
}

PointEstimates point_estimate_all(const VectorInputs& inputs,
                                  const Topology& g,
                                  const HeavyHitterConfig& cfg,
                                  std::uint64_t seed) {
  return point_estimate_all(inputs, center_tree(g), cfg, seed);
}

std::vector<std::size_t> heavy_hitters(const std::vector<double>& estimates,
                                       double eps, double f2_estimate) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ParameterError("heavy_hitters needs eps in (0, 1)");
  }
  if (!(f2_estimate >= 0.0)) {
    throw ParameterError("F2 estimate must be non-negative");
  }
  const double threshold = 0.5 * eps * std::sqrt(f2_estimate);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (estimates[i] >= threshold && estimates[i] > 0.0) out.push_back(i);
  }
  std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    return estimates[a] > estimates[b];
  });
  const auto cap = static_cast<std::size_t>(std::ceil(4.0 / (eps * eps)));
  if (out.size() > cap) out.resize(cap);
  return out;
}

}  // namespace mpsketch
