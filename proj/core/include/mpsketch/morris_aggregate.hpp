#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mpsketch/morris.hpp"
#include "mpsketch/protocol_engine.hpp"
#include "mpsketch/topology.hpp"

namespace mpsketch {

/// A signed integer batch, magnitude saturated at UINT64_MAX.
struct SignedUpdate {
  bool negative = false;
  std::uint64_t magnitude = 0;
};

/// Rounds to nearest and saturates.
SignedUpdate to_signed_update(long double value) noexcept;

struct MorrisAggregateOptions {
  double base = 2.0;
  std::uint8_t base_index = 0;
  /// false: one insertion-only counter per coordinate (no del half on the
  /// wire).
  bool signed_counters = true;
  /// Counter values above this raise CounterOverflow (the failure event).
  std::uint64_t value_cap = std::uint64_t{1} << 40;
  /// Streams derive_seed(seed, {kMorris, vertex, coordinate}).
  std::uint64_t seed = 0;
  /// The last `tail_width` coordinates are insertion-only counters with base
  /// `tail_base` (wire base index tail_base_index), e.g. an F_1 counter
  /// riding in the same message as a signed sketch.
  std::size_t tail_width = 0;
  double tail_base = 2.0;
  std::uint8_t tail_base_index = 1;
};

struct MorrisAggregateResult {
  std::vector<SignedMorrisCounter> root;
  CommStats stats;
  std::size_t max_message_bits = 0;
  std::uint64_t max_counter_value = 0;
};

/// Morris convergecast: each vertex merges its children's counters, feeds
/// its own batch for every coordinate, and forwards one counter (pair) per
/// coordinate. local[v] may be empty (no data); otherwise it has `width`
/// batches. Bundles open with a one-bit "subtree non-zero" flag.
MorrisAggregateResult morris_convergecast(
    const SpanningTree& tree, const std::vector<std::vector<SignedUpdate>>& local,
    std::size_t width, const MorrisAggregateOptions& options);

}  // namespace mpsketch
