#include "mpsketch/fp_low.hpp"

#include <cmath>
#include <string>

#include "mpsketch/errors.hpp"
#include "mpsketch/morris.hpp"
#include "mpsketch/morris_aggregate.hpp"
#include "mpsketch/stats.hpp"

namespace mpsketch {
namespace {

double counter_base(double counter_eps, double eps, double counter_delta) {
  const double ce = counter_eps > 0.0 ? counter_eps : eps / 2.0;
  return 1.0 + (ce * counter_delta) * (ce * counter_delta);
}

void check_counter_params(double counter_eps, double counter_delta,
                          double base) {
  if (!(counter_eps >= 0.0)) throw ParameterError("counter_eps must be >= 0");
  if (!(counter_delta > 0.0 && counter_delta <= 1.0)) {
    throw ParameterError("counter_delta must lie in (0, 1]");
  }
  if (!(base > 1.0 && base <= 2.0)) {
    throw ParameterError("Morris base " + std::to_string(base) +
                         " is not in (1, 2] (below double resolution?)");
  }
}

}  // namespace

std::size_t FpLowConfig::rows() const {
  if (k != 0) return k;
  return static_cast<std::size_t>(std::ceil(c_k / (eps * eps)));
}

double FpLowConfig::base() const {
  return counter_base(counter_eps, eps, counter_delta);
}

void FpLowConfig::validate() const {
  if (!(p > 0.0 && p < 1.0)) {
    throw ParameterError("fp_low needs p in (0, 1), got " + std::to_string(p));
  }
  if (!(eps > 0.0 && eps < 0.5)) {
    throw ParameterError("fp_low needs eps in (0, 1/2)");
  }
  if (!(c_k > 0.0)) throw ParameterError("c_k must be positive");
  if (rows() < 16) throw ParameterError("fp_low needs k >= 16");
  if (!(eta > 0.0 && eta <= 1.0)) throw ParameterError("eta must be in (0, 1]");
  check_counter_params(counter_eps, counter_delta, base());
}

LiteralCounterParameters literal_counter_parameters(double p, double eps,
                                                    std::size_t k,
                                                    std::size_t n,
                                                    double c_prime) {
  LiteralCounterParameters out;
  out.delta = 1.0 / (200.0 * static_cast<double>(k));
  out.eps_prime = c_prime * eps * std::pow(out.delta, 1.0 / p) /
                  std::log(static_cast<double>(n) / out.delta);
  out.base_minus_one = (out.eps_prime * out.delta) * (out.eps_prime * out.delta);
  return out;
}

FpLowEstimate estimate_fp_low(const VectorInputs& inputs,
                              const SpanningTree& tree, const FpLowConfig& cfg,
                              std::uint64_t seed) {
  cfg.validate();
  const std::size_t n = common_dim(inputs);
  if (inputs.size() != tree.vertex_count()) {
    throw ParameterError("one input per vertex is required");
  }
  for (const auto& x : inputs) x.validate();

  FpLowEstimate out;
  out.k = cfg.rows();
  out.base = cfg.base();

  const double mnm = static_cast<double>(max_entry(inputs)) *
                     static_cast<double>(n) *
                     static_cast<double>(tree.vertex_count());
  SketchOptions sopt;
  sopt.entry_cap = cfg.entry_cap > 0.0 ? cfg.entry_cap : mnm * mnm * mnm;
  const SketchMatrix s = build_sketch(out.k, n, cfg.p, cfg.eta,
                                      derive_seed(seed, {stream_tag::kSketch}),
                                      sopt);

  std::vector<std::vector<SignedUpdate>> local(inputs.size());
  for (std::size_t v = 0; v < inputs.size(); ++v) {
    const SparseVector& x = inputs[v];
    if (x.empty()) continue;
    local[v].resize(out.k);
    for (std::size_t i = 0; i < out.k; ++i) {
      const auto row = s.integral_row(i);
      long double acc = 0.0L;
      for (std::size_t t = 0; t < x.nnz(); ++t) {
        acc += static_cast<long double>(row[x.index[t]]) *
               static_cast<long double>(x.value[t]);
      }
      local[v][i] = to_signed_update(acc);
    }
  }

  MorrisAggregateOptions mopt;
  mopt.base = out.base;
  mopt.value_cap = cfg.value_cap;
  mopt.seed = derive_seed(seed, {stream_tag::kMorris});
  MorrisAggregateResult agg = morris_convergecast(tree, local, out.k, mopt);

  out.rows.resize(out.k);
  for (std::size_t i = 0; i < out.k; ++i) {
    out.rows[i] = cfg.eta * agg.root[i].estimate();
  }
  out.norm = lower_median_abs(out.rows) / median_abs(cfg.p);
  out.fp = std::pow(out.norm, cfg.p);
  out.stats = std::move(agg.stats);
  out.max_message_bits = agg.max_message_bits;
  out.max_counter_value = agg.max_counter_value;
  return out;
}

FpLowEstimate estimate_fp_low(const VectorInputs& inputs, const Topology& g,
                              const FpLowConfig& cfg, std::uint64_t seed) {
  return estimate_fp_low(inputs, center_tree(g), cfg, seed);
}

std::size_t LogCosineConfig::rows() const {
  if (k != 0) return k;
  return static_cast<std::size_t>(std::ceil(c_k / (eps * eps)));
}

double LogCosineConfig::base() const {
  return counter_base(counter_eps, eps, counter_delta);
}

void LogCosineConfig::validate() const {
  if (!(p > 0.0 && p <= 2.0)) {
    throw ParameterError("log-cosine needs p in (0, 2]");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ParameterError("log-cosine needs eps in (0, 1)");
  }
  if (!(c_k > 0.0)) throw ParameterError("c_k must be positive");
  if (rows() < 1 || k_prime < 1) throw ParameterError("log-cosine needs rows");
  if (!(eta > 0.0 && eta <= 1.0)) throw ParameterError("eta must be in (0, 1]");
  check_counter_params(counter_eps, counter_delta, base());
}

double log_cosine_estimate(const std::vector<double>& y, double scale,
                           double p, double* mean_cos) {
  if (y.empty()) throw ParameterError("log-cosine needs at least one row");
  if (scale == 0.0) {
    if (mean_cos) *mean_cos = 1.0;
    return 0.0;
  }
  double acc = 0.0;
  for (double v : y) acc += std::cos(v / scale);
  const double mc = acc / static_cast<double>(y.size());
  if (mean_cos) *mean_cos = mc;
  if (mc >= 1.0) return 0.0;
  return scale * std::pow(-std::log(mc), 1.0 / p);
}

namespace {

// Column-major copy: the k entries of item j are contiguous.
std::vector<double> columns_of(const SketchMatrix& s) {
  std::vector<double> out(s.rows() * s.cols());
  for (std::size_t i = 0; i < s.rows(); ++i) {
    const auto row = s.integral_row(i);
    for (std::size_t j = 0; j < s.cols(); ++j) out[j * s.rows() + i] = row[j];
  }
  return out;
}

std::uint64_t saturating_magnitude(double integral) {
  const double v = std::fabs(integral);
  return v >= 0x1.0p64 ? UINT64_MAX : static_cast<std::uint64_t>(v);
}

std::uint64_t saturating_product(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  return __builtin_mul_overflow(a, b, &out) ? UINT64_MAX : out;
}

}  // namespace

LogCosineResult stream_fp_logcosine(const std::vector<StreamUpdate>& updates,
                                    std::size_t n, const LogCosineConfig& cfg,
                                    YMode mode, std::uint64_t seed) {
  cfg.validate();
  if (n == 0) throw ParameterError("stream dimension n must be >= 1");
  LogCosineResult out;
  out.k = cfg.rows();
  for (const StreamUpdate& u : updates) {
    if (u.item >= n) throw ParameterError("stream item out of range");
  }

  const SketchMatrix s = build_sketch(out.k, n, cfg.p, cfg.eta,
                                      derive_seed(seed, {stream_tag::kSketch}));
  const SketchMatrix s_aux =
      build_sketch(cfg.k_prime, n, cfg.p, cfg.eta,
                   derive_seed(seed, {stream_tag::kAuxSketch}));
  const std::vector<double> cols = columns_of(s);
  const std::vector<double> aux_cols = columns_of(s_aux);
  const std::size_t k = out.k;
  const std::size_t kp = cfg.k_prime;

  std::vector<double> y_aux(kp, 0.0);
  std::vector<double> y(k, 0.0);
  // Counter 2i feeds positive contributions of row i, 2i + 1 negative ones.
  // slot[j k + i] = 2i + (S_ij < 0) keeps the hot loop free of sign branches.
  std::vector<StreamingMorris> counters;
  std::vector<Rng> rngs;
  std::vector<std::uint64_t> mags;
  std::vector<std::uint32_t> slot;
  if (mode == YMode::kMorris) {
    mags.resize(cols.size());
    slot.resize(cols.size());
    for (std::size_t t = 0; t < cols.size(); ++t) {
      mags[t] = saturating_magnitude(cols[t]);
      slot[t] = static_cast<std::uint32_t>(2 * (t % k) + (cols[t] < 0.0 ? 1 : 0));
    }
    counters.assign(2 * k, StreamingMorris(cfg.base()));
    rngs.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      rngs.emplace_back(derive_seed(seed, {stream_tag::kMorris, i}));
    }
  }

  for (const StreamUpdate& u : updates) {
    if (u.delta == 0) continue;
    const double d = static_cast<double>(u.delta);
    const auto base = static_cast<std::size_t>(u.item);
    const double* a = aux_cols.data() + base * kp;
    for (std::size_t i = 0; i < kp; ++i) y_aux[i] += a[i] * d;
    if (mode == YMode::kExact) {
      const double* c = cols.data() + base * k;
      for (std::size_t i = 0; i < k; ++i) y[i] += c[i] * d;
    } else {
      const std::uint64_t* mg = mags.data() + base * k;
      const std::uint32_t* sl = slot.data() + base * k;
      for (std::size_t i = 0; i < k; ++i) {
        const std::uint64_t v =
            u.delta == 1 ? mg[i] : saturating_product(mg[i], u.delta);
        if (v != 0) counters[sl[i]].add(v, rngs[i]);
      }
    }
  }

  for (double& v : y_aux) v *= s_aux.eta();
  if (mode == YMode::kExact) {
    for (double& v : y) v *= s.eta();
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      y[i] = s.eta() * (counters[2 * i].estimate() - counters[2 * i + 1].estimate());
    }
  }

  out.scale = cfg.scale_multiplier * lower_median_abs(y_aux) / median_abs(cfg.p);
  if (out.scale == 0.0) return out;
  out.estimate = log_cosine_estimate(y, out.scale, cfg.p, &out.mean_cos);
  if (!(out.mean_cos > 0.0)) {
    out.fallback = true;
    out.estimate = out.scale;
  }
  return out;
}

}  // namespace mpsketch
