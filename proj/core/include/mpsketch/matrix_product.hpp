#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mpsketch/data.hpp"
#include "mpsketch/protocol_engine.hpp"
#include "mpsketch/rounded_aggregate.hpp"
#include "mpsketch/stable_dist.hpp"
#include "mpsketch/topology.hpp"

namespace mpsketch {

struct AmpConfig {
  double eps = 0.25;
  /// Sketch failure probability; the sketch error target is eps0 = eps / 4.
  double delta = 0.125;
  /// k = ceil(c_k / (delta * eps0^2)).
  double c_k = 0.125;
  std::size_t k = 0;
  /// Failure budget fed to gamma_for.
  double rounding_delta = 0.25;
  double c_exponent = 1.0;
  double eta = kDefaultEta;
  Codec codec = Codec::kRounded;

  double eps0() const noexcept { return eps / 4.0; }
  std::size_t rows() const;
  /// Throws ParameterError unless eps, delta in (0, 1) and k >= 16.
  void validate() const;
};

struct AmpResult {
  /// t1 x t2, row-major.
  std::vector<double> product;
  std::size_t t1 = 0;
  std::size_t t2 = 0;
  CommStats stats;
  std::size_t k = 0;
  std::size_t max_message_bits = 0;
  RoundingParams rounding;
};

/// Gaussian sketch with N(0, 1/k) entries: the p = 2 stable sketch (variance
/// 2) scaled by 1/sqrt(2k), drawn from derive_seed(seed, {kSketch}).
SketchMatrix amp_sketch(std::size_t n, const AmpConfig& cfg,
                        std::uint64_t seed);

/// Each player rounds the k x t1 cells of S X_v and the k x t2 cells of
/// S Y_v in one bundle; the root returns (S X)^T (S Y). Throws
/// ParameterError on shape mismatch.
AmpResult amp_estimate(const MatrixInputs& x_inputs,
                       const MatrixInputs& y_inputs, const SpanningTree& tree,
                       const AmpConfig& cfg, std::uint64_t seed);
AmpResult amp_estimate(const MatrixInputs& x_inputs,
                       const MatrixInputs& y_inputs, const Topology& g,
                       const AmpConfig& cfg, std::uint64_t seed);

/// (S X)^T (S Y) computed centrally from aggregates (row-major n x t).
std::vector<double> amp_standalone(const std::vector<std::uint64_t>& x,
                                   const std::vector<std::uint64_t>& y,
                                   std::size_t n, std::size_t t1,
                                   std::size_t t2, const AmpConfig& cfg,
                                   std::uint64_t seed);

}  // namespace mpsketch
