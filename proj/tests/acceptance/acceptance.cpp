// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. Every tolerance and trial count is pinned here.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mpsketch/errors.hpp"
#include "mpsketch/fp_high.hpp"
#include "mpsketch/harness/comms.hpp"
#include "mpsketch/harness/datagen.hpp"
#include "mpsketch/harness/experiment.hpp"
#include "mpsketch/harness/oracles.hpp"
#include "mpsketch/harness/report.hpp"
#include "mpsketch/heavy_hitters.hpp"
#include "mpsketch/matrix_product.hpp"
#include "mpsketch/morris.hpp"
#include "mpsketch/rounding.hpp"
#include "support/stat_tests.hpp"

namespace {

using namespace mpsketch;
using namespace mpsketch::harness;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4))) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!ok) {
      detail += " [miss]";
      pass = false;
    }
  }
};

constexpr std::uint64_t kSeed = 20240611;

ExperimentSpec base_spec(Protocol protocol, std::size_t trials) {
  ExperimentSpec s;
  s.protocol = protocol;
  s.trials = trials;
  s.seed = kSeed;
  return s;
}

// 1. Interpolation identity to 1e-12 relative on 10^3 reals over six
// decades; Var[Gamma(r)] <= gamma^2 r^2 plus three standard errors of the
// sample variance, 10^5 draws per r.
Outcome rounding_exactness() {
  Outcome o;
  Rng rng(derive_seed(kSeed, {1}));
  for (double gamma : {0.5, 0.01}) {
    const double lb = std::log1p(gamma);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double r = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
      const RoundingSplit s = rounding_split(r, lb);
      const double back = s.up_probability * s.upper_value +
                          (1.0 - s.up_probability) * s.lower_value;
      worst = std::max(worst, std::fabs(back - r) / r);
    }
    o.check(worst <= 1e-12, "gamma=%g identity err %.2e", gamma, worst);

    RoundingParams params;
    params.gamma = gamma;
    params.exponent_min = -100000;
    params.exponent_max = 100000;
    double worst_ratio = 0.0;
    bool ok = true;
    for (double r : {0.0042, 1.0, 7.3, 1000.0}) {
      const int n = 100000;
      std::vector<double> v(n);
      for (double& x : v) x = decode(round_stochastic(r, params, rng), params);
      const double mu = support::mean(v);
      double m2 = 0.0, m4 = 0.0;
      for (double x : v) {
        const double d = (x - mu) * (x - mu);
        m2 += d;
        m4 += d * d;
      }
      m2 /= n - 1;
      m4 /= n;
      const double se = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
      const double bound = gamma * gamma * r * r;
      ok = ok && m2 <= bound + 3.0 * se;
      worst_ratio = std::max(worst_ratio, m2 / bound);
    }
    o.check(ok, "gamma=%g max Var/(gamma r)^2 %.3f", gamma, worst_ratio);
  }
  return o;
}

// 2. n = 10^4 unit increments, 10^4 counters per base.
Outcome morris_moments() {
  Outcome o;
  const std::uint64_t n = 10000;
  const int trials = 10000;
  for (double b : {1.05, 1.2}) {
    Rng rng(derive_seed(kSeed, {2, static_cast<std::uint64_t>(b * 100)}));
    std::vector<double> est(trials);
    for (double& e : est) {
      MorrisCounter c(b);
      for (std::uint64_t i = 0; i < n; ++i) c.increment(rng);
      e = c.estimate();
    }
    const double nd = static_cast<double>(n);
    const double var_theory = (b - 1.0) * nd * (nd + 1.0) / 2.0;
    const double sigma = std::sqrt(var_theory / trials);
    const double mean = support::mean(est);
    const double ratio = support::variance(est) / var_theory;
    o.check(std::fabs(mean - nd) <= 3.0 * sigma, "b=%g mean %.1f (3 sigma %.1f)",
            b, mean, 3.0 * sigma);
    o.check(ratio >= 0.7 && ratio <= 1.3, "b=%g var ratio %.3f", b, ratio);
  }
  return o;
}

// 3. Ten thousand merges against ten thousand direct counters, b = 1.2.
Outcome merge_correctness() {
  Outcome o;
  const double b = 1.2;
  const int trials = 10000;
  for (auto [n1, n2] : {std::pair<std::uint64_t, std::uint64_t>{500, 500}, {10, 990}}) {
    Rng rng(derive_seed(kSeed, {3, n1}));
    std::vector<std::uint64_t> merged, direct;
    for (int t = 0; t < trials; ++t) {
      MorrisCounter x(b), y(b), z(b);
      x.add_batch(n1, rng);
      y.add_batch(n2, rng);
      merged.push_back(merge(x, y, rng).value());
      z.add_batch(n1 + n2, rng);
      direct.push_back(z.value());
    }
    const auto r = support::chi_square_two_sample(merged, direct, 0.01);
    o.check(r.same, "(%llu,%llu) chi2 %.1f <= %.1f (dof %zu)",
            static_cast<unsigned long long>(n1), static_cast<unsigned long long>(n2),
            r.statistic, r.critical, r.dof);
  }
  return o;
}

// 4. p in {1.5, 2}, eps = 0.1, n = 10^3, Zipf(1.1), star and line of 64.
Outcome fp_high_accuracy() {
  Outcome o;
  for (const char* topo : {"star", "line"}) {
    for (double p : {1.5, 2.0}) {
      ExperimentSpec s = base_spec(Protocol::kFp, 100);
      s.topology = topo;
      s.m = 64;
      s.n = 1000;
      s.p = p;
      s.eps = 0.1;
      s.dist = "zipf:1.1";
      const Summary r = run_experiment(s, 1).summary;
      o.check(r.successes >= 70, "%s p=%g %zu/100", topo, p, r.successes);
    }
  }
  return o;
}

// 5. Lines of depth 4..256 at eps = 0.25, p = 1.5.
Outcome comm_scaling_fit() {
  Outcome o;
  CommScalingSpec spec;
  spec.seed = kSeed;
  const auto pts = comm_scaling(spec, 1);
  std::vector<double> x, y;
  for (const auto& pt : pts) {
    x.push_back(static_cast<double>(pt.depth));
    y.push_back(pt.bits_per_row);
  }
  const LogFit fit = fit_log_linear(x, y);
  o.check(fit.max_relative_residual < 0.15,
          "bits/row = %.2f + %.2f ln d, max residual %.3f", fit.a, fit.b,
          fit.max_relative_residual);
  const double saving = pts.front().baseline_bits_per_row / pts.front().bits_per_row;
  o.check(saving >= 1.5, "d=4 baseline/rounded %.2fx", saving);
  return o;
}

// 6. p in {0.25, 0.5}, eps = 0.15, line of 32, n = 10^3. Flatness keeps
// eight data holders fixed while the line grows from depth 4 to 64.
Outcome fp_low_accuracy_and_flatness() {
  Outcome o;
  for (double p : {0.25, 0.5}) {
    ExperimentSpec s = base_spec(Protocol::kFp, 100);
    s.topology = "line";
    s.m = 32;
    s.n = 1000;
    s.p = p;
    s.eps = 0.15;
    s.dist = "zipf:1.2";
    const Summary r = run_experiment(s, 1).summary;
    o.check(r.successes >= 70, "p=%g %zu/100", p, r.successes);

    std::vector<double> bits;
    for (std::size_t m : {9u, 129u}) {
      ExperimentSpec f = s;
      f.trials = 30;
      f.m = m;
      f.holders = 8;
      bits.push_back(run_experiment(f, 1).summary.mean_max_edge_bits);
    }
    const double drift = std::fabs(bits[1] / bits[0] - 1.0);
    o.check(drift <= 0.10, "p=%g bits d=4 %.0f d=64 %.0f (drift %.3f)", p,
            bits[0], bits[1], drift);
  }
  return o;
}

// 7. One coordinate of 10^3 among 10^3 unit coordinates, eps = 0.25,
// rows = ceil(2 log2 n), 8 x 8 grid.
Outcome point_estimation() {
  Outcome o;
  const std::size_t n = 1001, m = 64;
  const double eps = 0.25;
  const Topology g = grid(8, 8);
  const SpanningTree tree = center_tree(g);
  const DistSpec dist = parse_dist("planted:1000:1");
  int bound_ok = 0, recovered = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::uint64_t data_seed = derive_seed(kSeed, {stream_tag::kData, t});
    const std::uint64_t seed = derive_seed(kSeed, {stream_tag::kTrial, t});
    const auto agg = generate_aggregate(dist, n, 0, data_seed);
    const VectorInputs inputs = split_among_players(agg, m, data_seed);
    HeavyHitterConfig cfg;
    cfg.eps = eps;
    const PointEstimates pe = point_estimate_all(inputs, tree, cfg, seed);
    double linf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      linf = std::max(linf, std::fabs(pe.estimates[i] - static_cast<double>(agg[i])));
    }
    bound_ok += linf <= eps * oracle::tail_norm(agg, 16) ? 1 : 0;

    FpHighConfig f2;
    f2.p = 2.0;
    f2.eps = eps;
    const double f2_est =
        estimate_fp_high(inputs, tree, f2, derive_seed(seed, {stream_tag::kAuxSketch})).fp;
    const auto found = heavy_hitters(pe.estimates, eps, f2_est);
    const auto planted = static_cast<std::size_t>(
        std::max_element(agg.begin(), agg.end()) - agg.begin());
    recovered += std::find(found.begin(), found.end(), planted) != found.end() ? 1 : 0;
  }
  o.check(bound_ok >= 95, "l_inf bound %d/100", bound_ok);
  o.check(recovered == 100, "planted recovered %d/100", recovered);
  return o;
}

// 8. Uniform, single-item and 90/10 instances at eps = 0.2, distributed on
// a star of 16 and streaming.
Outcome entropy_accuracy() {
  Outcome o;
  struct Case {
    const char* name;
    const char* dist;
    std::size_t n;
    double h;
  };
  const Case cases[] = {
      {"uniform", "uniform:100", 1000, std::log(1000.0)},
      {"single", "values:1000", 1000, 0.0},
      {"90/10", "values:900,100", 1000, -(0.9 * std::log(0.9) + 0.1 * std::log(0.1))},
  };
  for (const Case& c : cases) {
    for (Protocol protocol : {Protocol::kEntropy, Protocol::kStreamEntropy}) {
      ExperimentSpec s = base_spec(protocol, 100);
      s.topology = "star";
      s.m = 16;
      s.n = c.n;
      s.eps = 0.2;
      s.dist = c.dist;
      const ExperimentResult r = run_experiment(s, 1);
      const bool exact_ok = std::fabs(r.trials[0].exact - c.h) < 1e-12;
      o.check(r.summary.successes >= 70 && exact_ok, "%s %s %zu/100", c.name,
              protocol == Protocol::kEntropy ? "distributed" : "streaming",
              r.summary.successes);
    }
  }
  return o;
}

// 9. p = 0.5, eps = 0.15, 10^5 Zipf(1.3) updates over n = 10^3, both
// y modes on the same data and sketch.
Outcome log_cosine() {
  Outcome o;
  ExperimentSpec s = base_spec(Protocol::kStreamFp, 100);
  s.p = 0.5;
  s.eps = 0.15;
  s.n = 1000;
  s.items = 100000;
  s.dist = "zipf:1.3";
  s.mode = YMode::kExact;
  const ExperimentResult exact = run_experiment(s, 1);
  s.mode = YMode::kMorris;
  const ExperimentResult morris = run_experiment(s, 1);
  o.check(exact.summary.successes * 3 >= 200, "exact-y %zu/100",
          exact.summary.successes);
  o.check(morris.summary.successes * 3 >= 200, "morris-y %zu/100",
          morris.summary.successes);
  std::size_t agree = 0;
  for (std::size_t t = 0; t < 100; ++t) {
    const double gap = std::fabs(exact.trials[t].estimate - morris.trials[t].estimate);
    agree += gap <= 0.5 * s.eps * exact.trials[t].exact ? 1 : 0;
  }
  o.check(agree * 3 >= 200, "modes within eps/2 %zu/100", agree);
  return o;
}

// 10. n = 500, t1 = t2 = 4, star of 16, eps = 0.25.
Outcome amp() {
  Outcome o;
  ExperimentSpec s = base_spec(Protocol::kAmp, 100);
  s.topology = "star";
  s.m = 16;
  s.n = 500;
  s.t1 = 4;
  s.t2 = 4;
  s.eps = 0.25;
  s.dist = "sparse:0.2";
  const Summary r = run_experiment(s, 1).summary;
  o.check(r.successes >= 70, "Frobenius bound %zu/100", r.successes);

  double worst = 0.0;
  const DistSpec dist = parse_dist(s.dist);
  for (std::uint64_t t = 0; t < 5; ++t) {
    const auto x = generate_matrix(dist, 500, 4, 0, derive_seed(kSeed, {10, t}));
    const auto y = generate_matrix(dist, 500, 4, 0, derive_seed(kSeed, {11, t}));
    const MatrixInputs xs = split_matrix_among_players(x, 500, 4, 16, t);
    const MatrixInputs ys = split_matrix_among_players(y, 500, 4, 16, t + 100);
    AmpConfig cfg;
    cfg.codec = Codec::kExact;
    const AmpResult res = amp_estimate(xs, ys, star(16), cfg, t);
    const auto want = amp_standalone(x, y, 500, 4, 4, cfg, t);
    worst = std::max(worst, oracle::frobenius_distance(res.product, want) /
                                oracle::frobenius(want));
  }
  o.check(worst <= 1e-10, "exact codec vs standalone rel %.2e", worst);
  return o;
}

std::string capture(const std::string& args, int& status) {
  const std::string cmd = std::string(MPSKETCH_CLI_PATH) + " " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int st = ::pclose(pipe);
  status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

// 11. Every simulate / stream verb twice with the same seed.
Outcome determinism() {
  Outcome o;
  const char* runs[] = {
      "simulate fp --p 1.5 --eps 0.2 --m 16 --n 300 --trials 3 --seed 5",
      "simulate fp --p 0.5 --eps 0.2 --m 9 --topology line --n 300 --trials 3 --seed 5",
      "simulate hh --m 16 --topology grid --n 300 --trials 3 --seed 5 --out json",
      "simulate entropy --m 8 --n 300 --trials 3 --seed 5",
      "simulate amp --m 8 --n 200 --trials 3 --seed 5",
      "stream fp --n 300 --items 5000 --eps 0.3 --trials 3 --seed 5 --mode morris-y",
      "stream fp --n 300 --items 5000 --eps 0.3 --trials 3 --seed 5",
      "stream entropy --n 300 --items 5000 --trials 3 --seed 5",
  };
  int identical = 0, total = 0;
  for (const char* args : runs) {
    int sa = 0, sb = 0;
    const std::string a = capture(args, sa);
    const std::string b = capture(args, sb);
    ++total;
    const bool ok = sa == 0 && sb == 0 && !a.empty() && a == b;
    identical += ok ? 1 : 0;
    if (!ok) o.check(false, "differs: %s", args);
  }
  o.check(identical == total, "%d/%d invocations byte-identical", identical, total);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "rounding exactness", rounding_exactness},
      {2, "Morris moments", morris_moments},
      {3, "merge correctness", merge_correctness},
      {4, "F_p high accuracy", fp_high_accuracy},
      {5, "communication scaling", comm_scaling_fit},
      {6, "F_p low accuracy and flatness", fp_low_accuracy_and_flatness},
      {7, "point estimation", point_estimation},
      {8, "entropy", entropy_accuracy},
      {9, "streaming log-cosine", log_cosine},
      {10, "approximate matrix product", amp},
      {11, "determinism", determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
