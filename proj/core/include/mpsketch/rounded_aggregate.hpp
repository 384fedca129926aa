#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mpsketch/protocol_engine.hpp"
#include "mpsketch/rounding.hpp"
#include "mpsketch/topology.hpp"

namespace mpsketch {

/// How each coordinate crosses an edge.
enum class Codec {
  kRounded,  // stochastic rounding onto the (1+gamma) grid
  kExact,    // raw doubles, 64 bits each
};

struct AggregateOptions {
  Codec codec = Codec::kRounded;
  RoundingParams rounding;
  /// ln K of the truncation rule; values below (mK)^-(d+3-layer) go as 0.
  double log_k = 0.0;
  /// Rounding streams are derive_seed(seed, {kRounding, vertex, coordinate}).
  std::uint64_t seed = 0;
};

struct AggregateResult {
  /// Root's combined value per coordinate (never rounded).
  std::vector<double> root;
  CommStats stats;
  /// Longest single coordinate message observed, in bits.
  std::size_t max_message_bits = 0;
  /// Non-zero values replaced by 0 under the truncation rule.
  std::size_t truncated = 0;
};

/// Recursive randomized rounding over `tree`: every vertex adds its children's
/// decoded values to its own `local` vector, truncates, rounds each
/// coordinate and sends the bundle to its parent. Bundles open with a
/// one-bit "subtree non-zero" flag; an all-zero subtree costs that bit only.
/// local[v] may be empty, meaning all zeros; otherwise it has `width` entries.
AggregateResult rounded_convergecast(
    const SpanningTree& tree, const std::vector<std::vector<double>>& local,
    std::size_t width, const AggregateOptions& options);

/// Bits of the longest coordinate message the window admits.
std::size_t max_rounded_message_bits(const RoundingParams& params) noexcept;

}  // namespace mpsketch
