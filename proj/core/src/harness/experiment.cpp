#include "mpsketch/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include "mpsketch/entropy.hpp"
#include "mpsketch/errors.hpp"
#include "mpsketch/fp_high.hpp"
#include "mpsketch/harness/datagen.hpp"
#include "mpsketch/harness/oracles.hpp"
#include "mpsketch/heavy_hitters.hpp"
#include "mpsketch/matrix_product.hpp"
#include "mpsketch/rng.hpp"
#include "mpsketch/topology.hpp"

namespace mpsketch::harness {

std::string protocol_name(Protocol p) {
  switch (p) {
    case Protocol::kFp: return "fp";
    case Protocol::kHeavyHitters: return "hh";
    case Protocol::kEntropy: return "entropy";
    case Protocol::kAmp: return "amp";
    case Protocol::kStreamFp: return "stream-fp";
    case Protocol::kStreamEntropy: return "stream-entropy";
  }
  return "unknown";
}

namespace {

void require_file(const std::string& path) {
  if (!path.empty() && !std::filesystem::is_regular_file(path)) {
    throw Error("input file '" + path + "' does not exist");
  }
}

bool is_stream(Protocol p) {
  return p == Protocol::kStreamFp || p == Protocol::kStreamEntropy;
}

void fill_stats(TrialReport& r, const CommStats& s) {
  r.max_edge_bits = s.max_edge_bits;
  r.total_bits = s.total_bits;
  r.rounds = s.rounds;
}

double relative(double abs_error, double scale) {
  if (abs_error == 0.0) return 0.0;
  return scale > 0.0 ? abs_error / scale
                     : std::numeric_limits<double>::infinity();
}

std::vector<std::uint64_t> capped(std::vector<std::uint64_t> x,
                                  std::uint64_t cap) {
  if (cap != 0) {
    for (auto& v : x) v = std::min(v, cap);
  }
  return x;
}

bool all_zero(const std::vector<std::uint64_t>& x) {
  return std::all_of(x.begin(), x.end(), [](std::uint64_t v) { return v == 0; });
}

VectorInputs players(const ExperimentSpec& spec,
                     const std::vector<std::uint64_t>& agg,
                     std::uint64_t data_seed) {
  if (spec.holders == 0) return split_among_players(agg, spec.m, data_seed);
  return place_holders(split_among_players(agg, spec.holders, data_seed),
                       spec.m);
}

MatrixInputs matrix_players(const ExperimentSpec& spec,
                            const std::vector<std::uint64_t>& agg,
                            std::size_t n, std::size_t t,
                            std::uint64_t data_seed) {
  const std::size_t h = spec.holders == 0 ? spec.m : spec.holders;
  MatrixInputs out = split_matrix_among_players(agg, n, t, h, data_seed);
  return spec.holders == 0 ? out : place_holders(std::move(out), spec.m);
}

void trial_fp(const ExperimentSpec& spec, const SpanningTree& tree,
              const std::vector<std::uint64_t>& agg, std::uint64_t data_seed,
              std::uint64_t seed, TrialReport& r) {
  const VectorInputs inputs = players(spec, agg, data_seed);
  r.exact = oracle::frequency_moment(agg, spec.p);
  if (spec.p > 1.0) {
    FpHighConfig cfg;
    cfg.p = spec.p;
    cfg.eps = spec.eps;
    cfg.k = spec.k;
    cfg.codec = spec.codec;
    const FpEstimate e = estimate_fp_high(inputs, tree, cfg, seed);
    r.estimate = e.fp;
    fill_stats(r, e.stats);
  } else {
    FpLowConfig cfg;
    cfg.p = spec.p;
    cfg.eps = spec.eps;
    cfg.k = spec.k;
    const FpLowEstimate e = estimate_fp_low(inputs, tree, cfg, seed);
    r.estimate = e.fp;
    fill_stats(r, e.stats);
  }
  r.abs_error = std::abs(r.estimate - r.exact);
  r.rel_error = relative(r.abs_error, r.exact);
  r.success = r.rel_error <= spec.eps;
}

// estimate = l_inf error of the point estimates, exact = ||X_tail(1/eps^2)||_2.
// Success needs the l_inf bound and every eps-heavy coordinate reported.
void trial_hh(const ExperimentSpec& spec, const SpanningTree& tree,
              const std::vector<std::uint64_t>& agg, std::uint64_t data_seed,
              std::uint64_t seed, TrialReport& r) {
  const VectorInputs inputs = players(spec, agg, data_seed);
  HeavyHitterConfig cfg;
  cfg.eps = spec.eps;
  cfg.codec = spec.codec;
  const PointEstimates pe = point_estimate_all(inputs, tree, cfg, seed);

  FpHighConfig f2cfg;
  f2cfg.p = 2.0;
  f2cfg.eps = std::min(spec.eps, 0.45);
  f2cfg.codec = spec.codec;
  const FpEstimate f2 = estimate_fp_high(
      inputs, tree, f2cfg, derive_seed(seed, {stream_tag::kAuxSketch}));

  double linf = 0.0;
  for (std::size_t i = 0; i < agg.size(); ++i) {
    linf = std::max(linf, std::abs(pe.estimates[i] - static_cast<double>(agg[i])));
  }
  const auto s = static_cast<std::size_t>(std::ceil(1.0 / (spec.eps * spec.eps)));
  r.exact = oracle::tail_norm(agg, s);
  r.estimate = linf;
  r.abs_error = linf;
  r.rel_error = relative(linf, r.exact);

  const std::vector<std::size_t> found = heavy_hitters(pe.estimates, spec.eps, f2.fp);
  const double l2 = oracle::lp_norm(agg, 2.0);
  bool recovered = true;
  for (std::size_t i = 0; i < agg.size(); ++i) {
    if (agg[i] > 0 && static_cast<double>(agg[i]) >= spec.eps * l2 &&
        std::find(found.begin(), found.end(), i) == found.end()) {
      recovered = false;
    }
  }
  r.success = linf <= spec.eps * r.exact && recovered;
  CommStats stats = pe.stats;
  stats.accumulate(f2.stats);
  fill_stats(r, stats);
}

void entropy_outcome(const ExperimentSpec& spec, double estimate,
                     const std::vector<std::uint64_t>& agg, TrialReport& r) {
  r.exact = oracle::entropy(agg);
  r.estimate = estimate;
  r.abs_error = std::abs(r.estimate - r.exact);
  r.rel_error = relative(r.abs_error, r.exact);
  r.success = r.abs_error <= spec.eps;
}

void trial_entropy(const ExperimentSpec& spec, const SpanningTree& tree,
                   const std::vector<std::uint64_t>& agg,
                   std::uint64_t data_seed, std::uint64_t seed,
                   TrialReport& r) {
  const VectorInputs inputs = players(spec, agg, data_seed);
  EntropyConfig cfg;
  cfg.eps = spec.eps;
  cfg.k = spec.k;
  const EntropyEstimate e = estimate_entropy(inputs, tree, cfg, seed);
  entropy_outcome(spec, e.entropy, agg, r);
  fill_stats(r, e.stats);
}

// estimate = ||R||_F, exact = ||X^T Y||_F, rel_error = ||R - X^T Y||_F /
// (||X||_F ||Y||_F).
void trial_amp(const ExperimentSpec& spec, const SpanningTree& tree,
               std::uint64_t data_seed, std::uint64_t seed, TrialReport& r) {
  std::size_t n = spec.n, t1 = spec.t1, t2 = spec.t2;
  std::vector<std::uint64_t> x, y;
  const DistSpec dist = parse_dist(spec.dist);
  if (!spec.x_file.empty()) {
    x = read_matrix_file(spec.x_file, n, t1);
  } else {
    x = generate_matrix(dist, n, t1, spec.items, derive_seed(data_seed, {1}));
  }
  if (!spec.y_file.empty()) {
    std::size_t ny = 0;
    y = read_matrix_file(spec.y_file, ny, t2);
    if (ny != n) throw ParameterError("X and Y must have the same row count");
  } else {
    y = generate_matrix(dist, n, t2, spec.items, derive_seed(data_seed, {2}));
  }
  x = capped(std::move(x), spec.max_entry);
  y = capped(std::move(y), spec.max_entry);
  const MatrixInputs xi =
      matrix_players(spec, x, n, t1, derive_seed(data_seed, {3}));
  const MatrixInputs yi =
      matrix_players(spec, y, n, t2, derive_seed(data_seed, {4}));
  AmpConfig cfg;
  cfg.eps = spec.eps;
  cfg.k = spec.k;
  cfg.codec = spec.codec;
  const AmpResult res = amp_estimate(xi, yi, tree, cfg, seed);
  const std::vector<double> truth = oracle::transpose_product(x, y, n, t1, t2);
  r.estimate = oracle::frobenius(res.product);
  r.exact = oracle::frobenius(truth);
  r.abs_error = oracle::frobenius_distance(res.product, truth);
  r.rel_error = relative(r.abs_error, oracle::frobenius(x) * oracle::frobenius(y));
  r.success = r.rel_error <= spec.eps;
  fill_stats(r, res.stats);
}

void trial_stream(const ExperimentSpec& spec, std::uint64_t data_seed,
                  std::uint64_t seed, TrialReport& r) {
  std::vector<StreamUpdate> updates;
  if (!spec.updates_file.empty()) {
    updates = read_stream_file(spec.updates_file);
  } else {
    updates = generate_stream(parse_dist(spec.dist), spec.n, spec.items, data_seed);
  }
  const std::vector<std::uint64_t> agg = stream_aggregate(updates, spec.n);
  if (spec.protocol == Protocol::kStreamFp) {
    LogCosineConfig cfg;
    cfg.p = spec.p;
    cfg.eps = spec.eps;
    cfg.k = spec.k;
    const LogCosineResult res = stream_fp_logcosine(updates, spec.n, cfg, spec.mode, seed);
    r.exact = oracle::lp_norm(agg, spec.p);
    r.estimate = res.estimate;
    r.abs_error = std::abs(r.estimate - r.exact);
    r.rel_error = relative(r.abs_error, r.exact);
    r.success = r.rel_error <= spec.eps;
    return;
  }
  if (all_zero(agg)) {
    r.success = true;
    return;
  }
  EntropyConfig cfg;
  cfg.eps = spec.eps;
  cfg.k = spec.k;
  const EntropyEstimate e = stream_entropy(updates, spec.n, cfg, seed);
  entropy_outcome(spec, e.entropy, agg, r);
}

}  // namespace

void ExperimentSpec::validate() const {
  if (trials < 1) throw ParameterError("trials must be >= 1");
  if (n < 1) throw ParameterError("n must be >= 1");
  if (m < 1) throw ParameterError("m must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  if (protocol == Protocol::kFp &&
      !((p > 0.0 && p < 1.0) || (p > 1.0 && p <= 2.0))) {
    throw ParameterError("simulate fp supports p in (0, 1) and (1, 2]");
  }
  if (protocol == Protocol::kStreamFp && !(p > 0.0 && p <= 2.0)) {
    throw ParameterError("stream fp supports p in (0, 2]");
  }
  if (holders > m) throw ParameterError("holders must not exceed m");
  if (protocol == Protocol::kAmp && (t1 < 1 || t2 < 1)) {
    throw ParameterError("t1 and t2 must be >= 1");
  }
  require_file(updates_file);
  require_file(x_file);
  require_file(y_file);
  if (dist.rfind("file:", 0) == 0) require_file(dist.substr(5));
  if (topology.rfind("file:", 0) == 0) require_file(topology.substr(5));
  (void)parse_dist(dist);
}

std::size_t threads_from_env() {
  const char* env = std::getenv("MPSKETCH_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v == 0) {
    throw ParameterError(std::string("MPSKETCH_THREADS must be a positive "
                                     "integer, got '") + env + "'");
  }
  return v;
}

double acceptance_threshold(Protocol p) {
  switch (p) {
    case Protocol::kHeavyHitters: return 0.95;
    case Protocol::kStreamFp: return 2.0 / 3.0;
    default: return 0.70;
  }
}

TrialReport run_trial(const ExperimentSpec& spec, std::size_t trial,
                      bool timing) {
  const auto start = std::chrono::steady_clock::now();
  TrialReport r;
  r.trial = trial;
  const std::uint64_t data_seed = derive_seed(spec.seed, {stream_tag::kData, trial});
  const std::uint64_t seed = derive_seed(spec.seed, {stream_tag::kTrial, trial});

  if (is_stream(spec.protocol)) {
    trial_stream(spec, data_seed, seed, r);
  } else {
    const Topology g = topology_from_spec(
        spec.topology, spec.m, derive_seed(spec.seed, {stream_tag::kTopology}));
    if (g.vertex_count() != spec.m) {
      throw ParameterError("topology '" + spec.topology + "' has " +
                           std::to_string(g.vertex_count()) +
                           " vertices but m = " + std::to_string(spec.m));
    }
    const SpanningTree tree = center_tree(g);
    if (spec.protocol == Protocol::kAmp) {
      trial_amp(spec, tree, data_seed, seed, r);
    } else {
      const auto agg = capped(
          generate_aggregate(parse_dist(spec.dist), spec.n, spec.items, data_seed),
          spec.max_entry);
      if (spec.protocol == Protocol::kEntropy && all_zero(agg)) {
        // H is undefined on the zero vector; the harness scores it as 0.
        r.success = true;
      } else if (spec.protocol == Protocol::kEntropy) {
        trial_entropy(spec, tree, agg, data_seed, seed, r);
      } else if (spec.protocol == Protocol::kHeavyHitters) {
        trial_hh(spec, tree, agg, data_seed, seed, r);
      } else {
        trial_fp(spec, tree, agg, data_seed, seed, r);
      }
    }
  }
  if (timing) {
    r.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

namespace {

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(v.size())) - 1.0);
  return v[std::min(idx, v.size() - 1)];
}

}  // namespace

Summary summarize(const std::vector<TrialReport>& trials, double threshold) {
  Summary s;
  s.trials = trials.size();
  s.threshold = threshold;
  if (trials.empty()) return s;
  std::vector<double> rel, abs;
  long double bits = 0.0L, total = 0.0L, rounds = 0.0L;
  for (const auto& t : trials) {
    s.successes += t.success ? 1 : 0;
    rel.push_back(t.rel_error);
    abs.push_back(t.abs_error);
    bits += t.max_edge_bits;
    total += t.total_bits;
    rounds += t.rounds;
    s.max_max_edge_bits = std::max(s.max_max_edge_bits, t.max_edge_bits);
    s.wall_seconds += t.wall_seconds;
  }
  const auto count = static_cast<long double>(trials.size());
  s.success_rate = static_cast<double>(s.successes) / static_cast<double>(s.trials);
  s.rel_error_median = quantile(rel, 0.5);
  s.rel_error_p90 = quantile(rel, 0.9);
  s.rel_error_max = *std::max_element(rel.begin(), rel.end());
  s.abs_error_median = quantile(abs, 0.5);
  s.mean_max_edge_bits = static_cast<double>(bits / count);
  s.mean_total_bits = static_cast<double>(total / count);
  s.mean_rounds = static_cast<double>(rounds / count);
  s.meets_threshold = s.success_rate >= threshold;
  return s;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, std::size_t threads,
                                bool timing) {
  spec.validate();
  if (threads == 0) threads = threads_from_env();
  threads = std::min(threads, spec.trials);

  ExperimentResult out;
  out.spec = spec;
  out.trials.resize(spec.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < spec.trials;) {
      try {
        out.trials[t] = run_trial(spec, t, timing);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = spec.trials;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  out.summary = summarize(out.trials, acceptance_threshold(spec.protocol));
  return out;
}

}  // namespace mpsketch::harness
