#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mpsketch/data.hpp"
#include "mpsketch/fp_low.hpp"
#include "mpsketch/protocol_engine.hpp"
#include "mpsketch/topology.hpp"

namespace mpsketch {

inline constexpr double kEntropyEta = 0x1.0p-8;

struct EntropyConfig {
  double eps = 0.2;
  /// k = ceil(c_k / eps^2) sketch rows.
  double c_k = 8.0;
  std::size_t k = 0;
  /// Sketch-row counters: base 1 + (counter_eps * counter_delta)^2;
  /// counter_eps = 0 means eps / 2.
  double counter_eps = 0.0;
  double counter_delta = 0.5;
  /// F_1 counter: every y_i is divided by its estimate, so its relative
  /// error is amplified by |y_i|; f1_eps = 0 means eps / (4 (1 + ln n)).
  double f1_eps = 0.0;
  double f1_delta = 0.5;
  double eta = kEntropyEta;
  double entry_cap = 0.0;  // 0: (M n m)^3
  std::uint64_t value_cap = std::uint64_t{1} << 40;
  /// Clamp the estimate into [0, ln n].
  bool clamp = true;

  std::size_t rows() const;
  double base() const;
  double f1_base(std::size_t n) const;
  void validate() const;
};

struct EntropyEstimate {
  /// Entropy in nats, after clamping when enabled.
  double entropy = 0.0;
  /// Estimate before clamping.
  double raw = 0.0;
  bool clamped = false;
  /// Estimate of ||X||_1 used to normalize the sketch.
  double l1 = 0.0;
  std::size_t k = 0;
  CommStats stats;
  std::size_t max_message_bits = 0;
};

/// -ln((1/k) sum_i exp(y_i)), evaluated through log-sum-exp.
double entropy_from_sketch(std::span<const double> y);

/// Sketch with F(1, -1, pi/2, 0) entries drawn from derive_seed(seed,
/// {kSketch}). With this sampler y_i = (S X)_i / ||X||_1 ~ F(1, -1, pi/2, -H),
/// so E exp(y_i) = exp(-H) and entropy_from_sketch recovers +H.
SketchMatrix entropy_sketch(std::size_t k, std::size_t n, double eta,
                            std::uint64_t seed, double entry_cap = 0.0);

/// Distributed protocol: one message per player carrying k signed Morris
/// counters for S X and one insertion-only counter for ||X||_1. Throws
/// DomainError when the aggregate is zero.
EntropyEstimate estimate_entropy(const VectorInputs& inputs,
                                 const SpanningTree& tree,
                                 const EntropyConfig& cfg, std::uint64_t seed);
EntropyEstimate estimate_entropy(const VectorInputs& inputs, const Topology& g,
                                 const EntropyConfig& cfg, std::uint64_t seed);

/// Streaming mode: y = S X maintained exactly, ||X||_1 counted exactly.
/// Throws DomainError on an empty stream.
EntropyEstimate stream_entropy(const std::vector<StreamUpdate>& updates,
                               std::size_t n, const EntropyConfig& cfg,
                               std::uint64_t seed);

inline constexpr double kNatsToBits = 1.4426950408889634;

}  // namespace mpsketch
