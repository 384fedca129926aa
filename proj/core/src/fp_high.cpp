#include "mpsketch/fp_high.hpp"

#include <cmath>
#include <string>

#include "mpsketch/errors.hpp"
#include "mpsketch/stats.hpp"

namespace mpsketch {

void FpHighConfig::validate() const {
  if (!(p > 1.0 && p <= 2.0)) {
    throw ParameterError("fp_high needs p in (1, 2], got " + std::to_string(p));
  }
  if (!(eps > 0.0 && eps < 0.5)) {
    throw ParameterError("fp_high needs eps in (0, 1/2)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("fp_high needs delta in (0, 1)");
  }
  if (!(c_k > 0.0)) throw ParameterError("c_k must be positive");
  if (rows() < 16) throw ParameterError("fp_high needs k >= 16");
}

std::size_t FpHighConfig::rows() const {
  if (k != 0) return k;
  const double scaled = eps / p;
  return static_cast<std::size_t>(std::ceil(c_k / (scaled * scaled)));
}

std::vector<std::vector<double>> local_sketches(const VectorInputs& inputs,
                                                const SketchMatrix& s) {
  std::vector<std::vector<double>> local(inputs.size());
  const std::size_t k = s.rows();
  for (std::size_t v = 0; v < inputs.size(); ++v) {
    const SparseVector& x = inputs[v];
    if (x.empty()) continue;
    local[v].assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      const auto row = s.integral_row(i);
      double acc = 0.0;
      for (std::size_t t = 0; t < x.nnz(); ++t) {
        acc += row[x.index[t]] * static_cast<double>(x.value[t]);
      }
      local[v][i] = s.eta() * acc;
    }
  }
  return local;
}

FpEstimate estimate_fp_high(const VectorInputs& inputs,
                            const SpanningTree& tree, const FpHighConfig& cfg,
                            std::uint64_t seed) {
  cfg.validate();
  const std::size_t n = common_dim(inputs);
  if (inputs.size() != tree.vertex_count()) {
    throw ParameterError("one input per vertex is required");
  }
  for (const auto& x : inputs) x.validate();

  FpEstimate out;
  out.k = cfg.rows();
  const double m = static_cast<double>(tree.vertex_count());
  const double max_in = static_cast<double>(max_entry(inputs));
  out.rounding = gamma_for(cfg.eps, cfg.delta, tree.depth,
                           static_cast<double>(n), m, cfg.c_exponent, max_in);

  const SketchMatrix s =
      build_sketch(out.k, n, cfg.p, cfg.eta,
                   derive_seed(seed, {stream_tag::kSketch}));
  AggregateOptions options;
  options.codec = cfg.codec;
  options.rounding = out.rounding;
  options.log_k = log_truncation_k(out.rounding.gamma, static_cast<double>(n),
                                   m, max_in);
  options.seed = derive_seed(seed, {stream_tag::kRounding});

  AggregateResult agg =
      rounded_convergecast(tree, local_sketches(inputs, s), out.k, options);
  out.stats = std::move(agg.stats);
  out.max_message_bits = agg.max_message_bits;
  out.truncated = agg.truncated;
  out.norm = lower_median_abs(agg.root) / median_abs(cfg.p);
  out.fp = std::pow(out.norm, cfg.p);
  return out;
}

FpEstimate estimate_fp_high(const VectorInputs& inputs, const Topology& g,
                            const FpHighConfig& cfg, std::uint64_t seed) {
  return estimate_fp_high(inputs, center_tree(g), cfg, seed);
}

}  // namespace mpsketch
