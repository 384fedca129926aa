#include "mpsketch/stable_dist.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "mpsketch/errors.hpp"

namespace mpsketch {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kThetaSeed = 0x7e7a5eedULL;

// P(Z <= x) for Z ~ D_p, x > 0, p != 1, from Zolotarev's integral
// representation (Nolan 1997 with beta = 0):
//   F(x) = 1/2 + I/pi (p < 1),  F(x) = 1 - I/pi (p > 1),
//   I = int_0^{pi/2} exp(-x^{p/(p-1)} V(t)) dt,
//   V(t) = (cos t / sin(p t))^{p/(p-1)} cos((p-1) t) / cos t.
double symmetric_stable_cdf(double x, double p) {
  const double a = p / (p - 1.0);
  const double log_x = std::log(x);
  auto integrand = [&](double t) {
    const double c = std::cos(t);
    const double s = std::sin(p * t);
    if (c <= 0.0 || s <= 0.0) return 0.0;
    const double log_v =
        a * (std::log(c) - std::log(s)) + std::log(std::cos((p - 1.0) * t)) -
        std::log(c);
    const double expo = a * log_x + log_v;
    if (expo > 700.0) return 0.0;
    return std::exp(-std::exp(expo));
  };
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          integrand, 0.0, kPi / 2.0, 12, 1e-11);
  return p < 1.0 ? 0.5 + integral / kPi : 1.0 - integral / kPi;
}

double theta_by_quadrature(double p) {
  // median of |Z| solves P(Z <= x) = 3/4.
  auto f = [p](double x) { return symmetric_stable_cdf(x, p) - 0.75; };
  double lo = 0.5;
  double hi = 2.0;
  while (f(lo) > 0.0) lo /= 2.0;
  while (f(hi) < 0.0) hi *= 2.0;
  std::uintmax_t iterations = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iterations);
  return 0.5 * (bracket.first + bracket.second);
}

}  // namespace

void StableParams::validate() const {
  if (!(p > 0.0 && p <= 2.0)) {
    throw ParameterError("stability index p must lie in (0, 2], got " +
                         std::to_string(p));
  }
  if (!(beta >= -1.0 && beta <= 1.0)) {
    throw ParameterError("skewness beta must lie in [-1, 1]");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ParameterError("scale must be positive");
  }
  if (!std::isfinite(location)) throw ParameterError("location must be finite");
  if (beta != 0.0 && p != 1.0) {
    throw ParameterError("skewed stable laws are supported only for p = 1");
  }
}

double sample_symmetric_stable(double p, Rng& rng) noexcept {
  const double v = kPi * (rng.uniform_open() - 0.5);
  if (p == 1.0) return std::tan(v);
  const double w = rng.exponential();
  if (p == 2.0) return 2.0 * std::sin(v) * std::sqrt(w);
  return std::sin(p * v) / std::pow(std::cos(v), 1.0 / p) *
         std::pow(std::cos((1.0 - p) * v) / w, (1.0 - p) / p);
}

double sample_stable(const StableParams& params, Rng& rng) {
  params.validate();
  if (params.beta == 0.0) {
    return params.scale * sample_symmetric_stable(params.p, rng) +
           params.location;
  }
  // p == 1, skewed. S(1, beta, 1, 0) draw, then the S1 scale/location map.
  const double beta = params.beta;
  const double v = kPi * (rng.uniform_open() - 0.5);
  const double w = rng.exponential();
  const double half_pi_bv = kPi / 2.0 + beta * v;
  const double x =
      (2.0 / kPi) *
      (half_pi_bv * std::tan(v) -
       beta * std::log((kPi / 2.0) * w * std::cos(v) / half_pi_bv));
  const double g = params.scale;
  return g * x + (2.0 / kPi) * beta * g * std::log(g) + params.location;
}

double median_abs_monte_carlo(double p, std::size_t samples) {
  if (!(p > 0.0 && p <= 2.0)) {
    throw ParameterError("median_abs requires p in (0, 2]");
  }
  if (samples == 0) throw ParameterError("samples must be positive");
  Rng rng(derive_seed(kThetaSeed, {std::bit_cast<std::uint64_t>(p)}));
  std::vector<double> draws(samples);
  for (double& d : draws) d = std::fabs(sample_symmetric_stable(p, rng));
  const std::size_t mid = (samples - 1) / 2;
  std::nth_element(draws.begin(), draws.begin() + static_cast<long>(mid),
                   draws.end());
  return draws[mid];
}

double median_abs(double p) {
  if (!(p > 0.0 && p <= 2.0)) {
    throw ParameterError("median_abs requires p in (0, 2], got " +
                         std::to_string(p));
  }
  // |Cauchy| has CDF (2/pi) arctan(x).
  if (p == 1.0) return 1.0;
  // D_2 = N(0, 2), so theta_2 = sqrt(2) * Phi^-1(3/4) = 2 erfinv(1/2).
  if (p == 2.0) return 0.95387255240893940;

  static std::mutex mu;
  static std::map<double, double> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto it = memo.find(p);
  if (it != memo.end()) return it->second;
  const double theta = theta_by_quadrature(p);
  memo.emplace(p, theta);
  return theta;
}

SketchMatrix::SketchMatrix(std::size_t k, std::size_t n, StableParams law,
                           double eta, std::uint64_t seed,
                           std::vector<double> entries)
    : k_(k), n_(n), law_(law), eta_(eta), seed_(seed),
      entries_(std::move(entries)) {
  if (entries_.size() != k_ * n_) {
    throw ParameterError("sketch entry count does not match k * n");
  }
}

SketchMatrix build_sketch(std::size_t k, std::size_t n, double p, double eta,
                          std::uint64_t seed, const SketchOptions& options) {
  if (k == 0 || n == 0) throw ParameterError("sketch needs k, n >= 1");
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw ParameterError("sketch precision eta must lie in (0, 1]");
  }
  if (n > options.max_entries / k) {
    throw CapacityError("sketch of " + std::to_string(k) + " x " +
                        std::to_string(n) + " exceeds the entry cap of " +
                        std::to_string(options.max_entries));
  }
  StableParams law{p, options.beta, options.scale, 0.0};
  law.validate();
  const double inv_eta = 1.0 / eta;
  const double cap = options.entry_cap;

  std::vector<double> entries(k * n);
  for (std::size_t i = 0; i < k; ++i) {
    Rng rng(derive_seed(seed, {stream_tag::kSketch, i}));
    double* row = entries.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      double z = law.beta == 0.0 && law.scale == 1.0
                     ? sample_symmetric_stable(p, rng)
                     : sample_stable(law, rng);
      while (!std::isfinite(z)) z = sample_stable(law, rng);
      double e = std::nearbyint(z * inv_eta);
      if (!std::isfinite(e)) e = std::copysign(1e300, z);
      if (cap > 0.0) e = std::clamp(e, -cap, cap);
      row[j] = e;
    }
  }
  return SketchMatrix(k, n, law, eta, seed, std::move(entries));
}

}  // namespace mpsketch
