#include "mpsketch/protocol_engine.hpp"

namespace mpsketch {

void CommStats::accumulate(const CommStats& other) {
  for (const auto& [edge, bits] : other.per_edge_bits) {
    per_edge_bits[edge] += bits;
  }
  total_bits += other.total_bits;
  messages += other.messages;
  rounds = std::max(rounds, other.rounds);
  max_edge_bits = 0;
  for (const auto& [edge, bits] : per_edge_bits) {
    max_edge_bits = std::max(max_edge_bits, bits);
  }
}

void validate_schedule(const SpanningTree& tree) {
  const std::size_t m = tree.vertex_count();
  if (tree.children.size() != m || tree.layer.size() != m || tree.root >= m) {
    throw TopologyError("malformed spanning tree");
  }
  if (tree.layer[tree.root] != tree.depth) {
    throw TopologyError("root must occupy the top layer");
  }
  for (Vertex v = 0; v < m; ++v) {
    if (v == tree.root) continue;
    const Vertex p = tree.parent[v];
    if (p >= m || tree.layer[p] != tree.layer[v] + 1) {
      throw TopologyError("vertex " + std::to_string(v) +
                          " is not one layer below its parent");
    }
  }
}

}  // namespace mpsketch
