#include "mpsketch/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mpsketch/errors.hpp"
#include "mpsketch/morris_aggregate.hpp"

namespace mpsketch {

std::size_t EntropyConfig::rows() const {
  if (k != 0) return k;
  return static_cast<std::size_t>(std::ceil(c_k / (eps * eps)));
}

double EntropyConfig::base() const {
  const double ce = counter_eps > 0.0 ? counter_eps : eps / 2.0;
  return 1.0 + (ce * counter_delta) * (ce * counter_delta);
}

double EntropyConfig::f1_base(std::size_t n) const {
  const double fe =
      f1_eps > 0.0
          ? f1_eps
          : eps / (4.0 * (1.0 + std::log(static_cast<double>(std::max<std::size_t>(n, 1)))));
  return 1.0 + (fe * f1_delta) * (fe * f1_delta);
}

void EntropyConfig::validate() const {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ParameterError("entropy needs eps in (0, 1)");
  }
  if (!(c_k > 0.0)) throw ParameterError("c_k must be positive");
  if (rows() < 16) throw ParameterError("entropy needs k >= 16");
  if (!(eta > 0.0 && eta <= 1.0)) throw ParameterError("eta must be in (0, 1]");
  if (!(counter_delta > 0.0 && counter_delta <= 1.0) ||
      !(f1_delta > 0.0 && f1_delta <= 1.0)) {
    throw ParameterError("counter deltas must lie in (0, 1]");
  }
  const double b = base();
  if (!(b > 1.0 && b <= 2.0)) {
    throw ParameterError("entropy counter base " + std::to_string(b) +
                         " is not in (1, 2]");
  }
}

double entropy_from_sketch(std::span<const double> y) {
  if (y.empty()) throw ParameterError("entropy needs at least one sketch row");
  const double top = *std::max_element(y.begin(), y.end());
  double acc = 0.0;
  for (double v : y) acc += std::exp(v - top);
  const double log_mean = top + std::log(acc / static_cast<double>(y.size()));
  return -log_mean;
}

SketchMatrix entropy_sketch(std::size_t k, std::size_t n, double eta,
                            std::uint64_t seed, double entry_cap) {
  SketchOptions opt;
  opt.beta = -1.0;
  opt.scale = std::numbers::pi / 2.0;
  opt.entry_cap = entry_cap;
  return build_sketch(k, n, 1.0, eta, derive_seed(seed, {stream_tag::kSketch}),
                      opt);
}

namespace {

void finish(EntropyEstimate& out, const std::vector<double>& y_unnormalized,
            double l1, std::size_t n, bool clamp) {
  out.l1 = l1;
  std::vector<double> y(y_unnormalized.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = y_unnormalized[i] / l1;
  out.raw = entropy_from_sketch(y);
  out.entropy = out.raw;
  if (clamp) {
    const double hi = std::log(static_cast<double>(n));
    out.entropy = std::clamp(out.raw, 0.0, hi);
    out.clamped = out.entropy != out.raw;
  }
}

}  // namespace

EntropyEstimate estimate_entropy(const VectorInputs& inputs,
                                 const SpanningTree& tree,
                                 const EntropyConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const std::size_t n = common_dim(inputs);
  if (inputs.size() != tree.vertex_count()) {
    throw ParameterError("one input per vertex is required");
  }
  bool any = false;
  for (const auto& x : inputs) {
    x.validate();
    any = any || !x.empty();
  }
  if (!any) throw DomainError("entropy of the zero vector is undefined");

  EntropyEstimate out;
  out.k = cfg.rows();
  const double mnm = static_cast<double>(max_entry(inputs)) *
                     static_cast<double>(n) *
                     static_cast<double>(tree.vertex_count());
  const double cap = cfg.entry_cap > 0.0 ? cfg.entry_cap : mnm * mnm * mnm;
  const SketchMatrix s = entropy_sketch(out.k, n, cfg.eta, seed, cap);

  // Coordinates 0..k-1: eta^-1 <S_i, X_v>; coordinate k: ||X_v||_1.
  std::vector<std::vector<SignedUpdate>> local(inputs.size());
  for (std::size_t v = 0; v < inputs.size(); ++v) {
    const SparseVector& x = inputs[v];
    if (x.empty()) continue;
    local[v].resize(out.k + 1);
    for (std::size_t i = 0; i < out.k; ++i) {
      const auto row = s.integral_row(i);
      long double acc = 0.0L;
      for (std::size_t t = 0; t < x.nnz(); ++t) {
        acc += static_cast<long double>(row[x.index[t]]) *
               static_cast<long double>(x.value[t]);
      }
      local[v][i] = to_signed_update(acc);
    }
    long double total = 0.0L;
    for (std::uint64_t val : x.value) total += static_cast<long double>(val);
    local[v][out.k] = to_signed_update(total);
  }

  MorrisAggregateOptions mopt;
  mopt.base = cfg.base();
  mopt.value_cap = cfg.value_cap;
  mopt.seed = derive_seed(seed, {stream_tag::kMorris});
  mopt.tail_width = 1;
  mopt.tail_base = cfg.f1_base(n);
  MorrisAggregateResult agg =
      morris_convergecast(tree, local, out.k + 1, mopt);

  std::vector<double> y(out.k);
  for (std::size_t i = 0; i < out.k; ++i) {
    y[i] = cfg.eta * agg.root[i].estimate();
  }
  double l1 = agg.root[out.k].estimate();
  if (!(l1 > 0.0)) l1 = 1.0;
  finish(out, y, l1, n, cfg.clamp);
  out.stats = std::move(agg.stats);
  out.max_message_bits = agg.max_message_bits;
  return out;
}

EntropyEstimate estimate_entropy(const VectorInputs& inputs, const Topology& g,
                                 const EntropyConfig& cfg, std::uint64_t seed) {
  return estimate_entropy(inputs, center_tree(g), cfg, seed);
}

EntropyEstimate stream_entropy(const std::vector<StreamUpdate>& updates,
                               std::size_t n, const EntropyConfig& cfg,
                               std::uint64_t seed) {
  cfg.validate();
  if (n == 0) throw ParameterError("stream dimension n must be >= 1");
  long double l1 = 0.0L;
  for (const StreamUpdate& u : updates) {
    if (u.item >= n) throw ParameterError("stream item out of range");
    l1 += static_cast<long double>(u.delta);
  }
  if (l1 == 0.0L) throw DomainError("entropy of an empty stream is undefined");

  EntropyEstimate out;
  out.k = cfg.rows();
  const SketchMatrix s = entropy_sketch(out.k, n, cfg.eta, seed, cfg.entry_cap);
  std::vector<double> cols(out.k * n);
  for (std::size_t i = 0; i < out.k; ++i) {
    const auto row = s.integral_row(i);
    for (std::size_t j = 0; j < n; ++j) cols[j * out.k + i] = row[j];
  }
  std::vector<double> y(out.k, 0.0);
  for (const StreamUpdate& u : updates) {
    const double d = static_cast<double>(u.delta);
    const double* c = cols.data() + static_cast<std::size_t>(u.item) * out.k;
    for (std::size_t i = 0; i < out.k; ++i) y[i] += c[i] * d;
  }
  for (double& v : y) v *= s.eta();
  finish(out, y, static_cast<double>(l1), n, cfg.clamp);
  return out;
}

}  // namespace mpsketch
