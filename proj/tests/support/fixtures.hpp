#pragma once

// Small input builders shared by the protocol tests.

#include <cstdint>
#include <string>
#include <vector>

#include "mpsketch/data.hpp"
#include "mpsketch/harness/datagen.hpp"

namespace mpsketch::support {

/// Aggregate drawn from `dist`, split uniformly among m players.
inline VectorInputs split_inputs(const std::string& dist, std::size_t n,
                                 std::size_t m, std::uint64_t seed,
                                 std::size_t items = 10000) {
  const auto agg = harness::generate_aggregate(harness::parse_dist(dist), n,
                                               items, seed);
  return harness::split_among_players(agg, m, seed);
}

/// Player 0 holds `x`, every other player holds nothing.
inline VectorInputs single_holder(const std::vector<std::uint64_t>& x,
                                  std::size_t m) {
  VectorInputs out(m);
  for (auto& v : out) v.dim = x.size();
  out[0] = SparseVector::from_dense(x);
  return out;
}

}  // namespace mpsketch::support
