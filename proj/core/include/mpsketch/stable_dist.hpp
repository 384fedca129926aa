#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mpsketch/rng.hpp"

namespace mpsketch {

/// Parameters of the stable family F(p, beta, scale, location) in Nolan's S1
/// parameterization. With beta = 0, scale = 1, location = 0 this is D_p, the
/// law with characteristic function exp(-|t|^p).
struct StableParams {
  double p = 2.0;
  double beta = 0.0;
  double scale = 1.0;
  double location = 0.0;

  /// Throws ParameterError unless p in (0,2], beta in [-1,1], scale > 0, and
  /// beta != 0 only when p == 1.
  void validate() const;
  friend bool operator==(const StableParams&, const StableParams&) = default;
};

/// One draw via the Chambers-Mallows-Stuck transform.
double sample_stable(const StableParams& params, Rng& rng);

/// D_p draw without the validation overhead; p must be in (0,2].
double sample_symmetric_stable(double p, Rng& rng) noexcept;

/// theta_p, the median of |Z| for Z ~ D_p. Closed form for p in {1, 2};
/// otherwise the CDF is integrated numerically and inverted (memoized per p).
double median_abs(double p);

/// Fixed-seed Monte-Carlo estimate of theta_p from `samples` draws. Kept as
/// an independent cross-check of median_abs.
double median_abs_monte_carlo(double p, std::size_t samples);

/// k x n sketch with entries round(z / eta), z drawn from the stable law.
/// Entries are stored as integral doubles so eta^-1 * S is exactly integral.
class SketchMatrix {
 public:
  SketchMatrix(std::size_t k, std::size_t n, StableParams law, double eta,
               std::uint64_t seed, std::vector<double> entries);

  std::size_t rows() const noexcept { return k_; }
  std::size_t cols() const noexcept { return n_; }
  double p() const noexcept { return law_.p; }
  const StableParams& law() const noexcept { return law_; }
  double eta() const noexcept { return eta_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Integral entry eta^-1 * S_ij.
  double integral(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * n_ + j];
  }
  /// Real-valued entry S_ij = eta * integral(i, j).
  double value(std::size_t i, std::size_t j) const noexcept {
    return eta_ * entries_[i * n_ + j];
  }
  std::span<const double> integral_row(std::size_t i) const noexcept {
    return {entries_.data() + i * n_, n_};
  }
  const std::vector<double>& integral_entries() const noexcept {
    return entries_;
  }

  friend bool operator==(const SketchMatrix&, const SketchMatrix&) = default;

 private:
  std::size_t k_;
  std::size_t n_;
  StableParams law_;
  double eta_;
  std::uint64_t seed_;
  std::vector<double> entries_;
};

struct SketchOptions {
  double beta = 0.0;
  double scale = 1.0;
  /// Capacity cap on k * n.
  std::size_t max_entries = std::size_t{1} << 28;
  /// Clamp on |eta^-1 * S_ij|; 0 disables clamping.
  double entry_cap = 0.0;
};

/// Row i is drawn from the stream derive_seed(seed, {kSketch, i}), so any
/// (seed, k, n, p, eta) regenerates a bit-identical matrix.
SketchMatrix build_sketch(std::size_t k, std::size_t n, double p, double eta,
                          std::uint64_t seed, const SketchOptions& options = {});

/// Default precision 2^-30 for real-valued sketches.
inline constexpr double kDefaultEta = 0x1.0p-30;

}  // namespace mpsketch
