#pragma once

#include <cstddef>
#include <cstdint>

#include "mpsketch/data.hpp"
#include "mpsketch/protocol_engine.hpp"
#include "mpsketch/rounded_aggregate.hpp"
#include "mpsketch/stable_dist.hpp"
#include "mpsketch/topology.hpp"

namespace mpsketch {

struct FpHighConfig {
  double p = 2.0;
  double eps = 0.1;
  /// Failure budget fed to gamma_for.
  double delta = 0.25;
  /// k = ceil(c_k * p^2 / eps^2): the norm is estimated to eps / p so that
  /// its p-th power lands within eps of F_p.
  double c_k = 8.0;
  /// Overrides the derived row count when non-zero.
  std::size_t k = 0;
  double c_exponent = 1.0;
  double eta = kDefaultEta;
  Codec codec = Codec::kRounded;

  /// Throws ParameterError unless p in (1, 2], eps in (0, 1/2), k >= 16.
  void validate() const;
  std::size_t rows() const;
};

struct FpEstimate {
  double norm = 0.0;  // estimate of ||X||_p
  double fp = 0.0;    // norm^p
  CommStats stats;
  std::size_t k = 0;
  std::size_t max_message_bits = 0;
  std::size_t truncated = 0;
  RoundingParams rounding;
};

/// Indyk's median estimator over the recursive randomized-rounding
/// convergecast: k sketch coordinates travel as one bundle per player, the
/// root returns median_i |C_i| / theta_p. The sketch is drawn from
/// derive_seed(seed, {kSketch}); rounding from derive_seed(seed, {kRounding}).
FpEstimate estimate_fp_high(const VectorInputs& inputs,
                            const SpanningTree& tree, const FpHighConfig& cfg,
                            std::uint64_t seed);
FpEstimate estimate_fp_high(const VectorInputs& inputs, const Topology& g,
                            const FpHighConfig& cfg, std::uint64_t seed);

/// Per-player sketch coordinates <S_i, X_v>; empty for players without data.
std::vector<std::vector<double>> local_sketches(const VectorInputs& inputs,
                                                const SketchMatrix& s);

}  // namespace mpsketch
