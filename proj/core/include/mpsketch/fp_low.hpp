#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mpsketch/data.hpp"
#include "mpsketch/protocol_engine.hpp"
#include "mpsketch/stable_dist.hpp"
#include "mpsketch/topology.hpp"

namespace mpsketch {

// Rounding S to multiples of eta moves ||X||_p by at most
// (eta / 2) ||X||_1 / ||X||_p <= eta / 2 relative when p <= 1.
inline constexpr double kFpLowEta = 0x1.0p-10;

struct FpLowConfig {
  double p = 0.5;
  double eps = 0.15;
  /// k = ceil(c_k / eps^2).
  double c_k = 8.0;
  std::size_t k = 0;
  /// Morris base 1 + (counter_eps * counter_delta)^2; counter_eps = 0 means
  /// eps / 2.
  double counter_eps = 0.0;
  double counter_delta = 0.5;
  double eta = kFpLowEta;
  /// Clamp on |eta^-1 S_ij|; 0 means (M n m)^3.
  double entry_cap = 0.0;
  /// Counter values above this are the protocol's failure event.
  std::uint64_t value_cap = std::uint64_t{1} << 40;

  std::size_t rows() const;
  double base() const;
  /// Throws ParameterError unless p in (0, 1), eps in (0, 1/2), k >= 16 and
  /// the base lies in (1, 2].
  void validate() const;
};

/// The literal row-failure/precision assignments delta = 1/(200k),
/// eps' = c' eps delta^(1/p) / ln(n / delta) and b - 1 = (eps' delta)^2.
/// Reported so callers can see why they are not used directly: b - 1 falls
/// far below double resolution at any practical size.
struct LiteralCounterParameters {
  double delta;
  double eps_prime;
  double base_minus_one;
};
LiteralCounterParameters literal_counter_parameters(double p, double eps,
                                                    std::size_t k,
                                                    std::size_t n,
                                                    double c_prime = 0.25);

struct FpLowEstimate {
  double norm = 0.0;
  double fp = 0.0;
  CommStats stats;
  std::size_t k = 0;
  double base = 0.0;
  std::size_t max_message_bits = 0;
  std::uint64_t max_counter_value = 0;
  /// Per-row eta * (estimate(ins) - estimate(del)).
  std::vector<double> rows;
};

/// Each player feeds eta^-1 <S_i, X_v> into a signed Morris counter per row,
/// merges its children's counters and forwards one counter pair per row; the
/// root returns eta * median_i |C_i| / theta_p. Sketch from
/// derive_seed(seed, {kSketch}), counter randomness from {kMorris}. Throws
/// CounterOverflow (with the vertex id) past value_cap.
FpLowEstimate estimate_fp_low(const VectorInputs& inputs,
                              const SpanningTree& tree, const FpLowConfig& cfg,
                              std::uint64_t seed);
FpLowEstimate estimate_fp_low(const VectorInputs& inputs, const Topology& g,
                              const FpLowConfig& cfg, std::uint64_t seed);

/// Insertion-only stream element: X_item += delta.
struct StreamUpdate {
  std::uint32_t item = 0;
  std::uint64_t delta = 0;
  friend bool operator==(const StreamUpdate&, const StreamUpdate&) = default;
};

enum class YMode {
  kExact,   // y = S X kept in floating point
  kMorris,  // y kept as signed Morris counters on eta^-1 S X
};

struct LogCosineConfig {
  double p = 0.5;
  double eps = 0.15;
  /// k = ceil(c_k / eps^2) rows for y; k_prime rows for the coarse y'.
  double c_k = 32.0;
  std::size_t k = 0;
  std::size_t k_prime = 32;
  /// s = scale_multiplier * median |y'_i| / theta_p. A wider scale keeps
  /// y_i / s small, where Morris noise in y perturbs the cosines least.
  double scale_multiplier = 3.0;
  /// counter_eps = 0 means eps / 2.
  double counter_eps = 0.0;
  double counter_delta = 0.5;
  double eta = kFpLowEta;

  std::size_t rows() const;
  double base() const;
  void validate() const;
};

struct LogCosineResult {
  /// Estimate of ||X||_p.
  double estimate = 0.0;
  /// y'_med = median |y'_i| / theta_p.
  double scale = 0.0;
  double mean_cos = 0.0;
  /// mean cos <= 0: the log is undefined and the coarse scale is returned.
  bool fallback = false;
  std::size_t k = 0;
};

/// R = s (-ln((1/k) sum_i cos(y_i / s)))^(1/p) with s = y'_med. Inverting
/// E cos(y_i / s) = exp(-(||X||_p / s)^p) needs the 1/p power; without it the
/// result is not a norm estimate for p != 1.
double log_cosine_estimate(const std::vector<double>& y, double scale,
                           double p, double* mean_cos = nullptr);

/// One pass over `updates` in order. Sketch S from derive_seed(seed,
/// {kSketch}), S' from {kAuxSketch}, counters from {kMorris}. Both modes
/// share S for a given seed.
LogCosineResult stream_fp_logcosine(const std::vector<StreamUpdate>& updates,
                                    std::size_t n, const LogCosineConfig& cfg,
                                    YMode mode, std::uint64_t seed);

}  // namespace mpsketch
