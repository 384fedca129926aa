#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mpsketch/errors.hpp"
#include "mpsketch/topology.hpp"

namespace mpsketch {

/// Bit accounting of one protocol run. Edges are keyed (min id, max id).
struct CommStats {
  std::map<Edge, std::uint64_t> per_edge_bits;
  std::uint64_t max_edge_bits = 0;
  std::uint64_t total_bits = 0;
  std::size_t rounds = 0;
  std::size_t messages = 0;

  /// Folds another run over the same tree into this one (edge-wise sums).
  void accumulate(const CommStats& other);

  friend bool operator==(const CommStats&, const CommStats&) = default;
};

struct NodeContext {
  Vertex vertex;
  std::size_t layer;
  std::size_t depth;
  bool is_root;
};

template <class Message>
struct ConvergecastResult {
  Message root;
  CommStats stats;
};

/// 64 bits per scalar: the full-precision comparator.
inline constexpr std::uint64_t kBaselineScalarBits = 64;
constexpr std::uint64_t baseline_codec_bits(std::size_t scalars) noexcept {
  return kBaselineScalarBits * scalars;
}

/// Checks the layer discipline: every non-root vertex sits exactly one layer
/// below its parent. Throws TopologyError otherwise.
void validate_schedule(const SpanningTree& tree);

/// One-shot convergecast. Layers run 0..depth; within a layer vertices run in
/// id order. node_fn(ctx, input, children) returns the vertex's message,
/// where `children` holds the messages of its tree children in id order.
/// Every non-root vertex sends its message to its parent exactly once and is
/// charged codec_bits(message). The root's message is the protocol output.
/// WindowError and CounterOverflow raised by a vertex are rethrown carrying
/// that vertex id.
template <class Message, class Inputs, class NodeFn, class CodecBits>
ConvergecastResult<Message> run_convergecast(const SpanningTree& tree,
                                             const Inputs& inputs,
                                             NodeFn&& node_fn,
                                             CodecBits&& codec_bits) {
  const std::size_t m = tree.vertex_count();
  if (static_cast<std::size_t>(std::size(inputs)) != m) {
    throw ParameterError("one input per vertex is required");
  }
  validate_schedule(tree);

  std::vector<std::optional<Message>> outbox(m);
  std::vector<bool> sent(m, false);
  ConvergecastResult<Message> result{Message{}, CommStats{}};
  CommStats& stats = result.stats;
  std::vector<Message> inbox;

  const auto layers = tree.layers();
  for (std::size_t t = 0; t < layers.size(); ++t) {
    bool layer_sent = false;
    for (Vertex v : layers[t]) {
      inbox.clear();
      for (Vertex c : tree.children[v]) {
        inbox.push_back(std::move(*outbox[c]));
        outbox[c].reset();
      }
      const NodeContext ctx{v, t, tree.depth, v == tree.root};
      Message msg = [&]() -> Message {
        try {
          return node_fn(ctx, inputs[v], std::span<Message>(inbox));
        } catch (const WindowError& e) {
          if (e.vertex() != WindowError::npos) throw;
          throw WindowError(std::string(e.what()) + " at vertex " +
                                std::to_string(v),
                            v);
        } catch (const CounterOverflow& e) {
          if (e.vertex() != CounterOverflow::npos) throw;
          throw CounterOverflow(std::string(e.what()) + " at vertex " +
                                    std::to_string(v),
                                v);
        }
      }();
      if (ctx.is_root) {
        result.root = std::move(msg);
        continue;
      }
      if (sent[v]) throw std::logic_error("vertex sent twice");
      sent[v] = true;
      const std::uint64_t bits = codec_bits(msg);
      const Vertex p = tree.parent[v];
      stats.per_edge_bits[{std::min(v, p), std::max(v, p)}] += bits;
      stats.total_bits += bits;
      ++stats.messages;
      layer_sent = true;
      outbox[v] = std::move(msg);
    }
    if (layer_sent) ++stats.rounds;
  }
  for (const auto& [edge, bits] : stats.per_edge_bits) {
    stats.max_edge_bits = std::max(stats.max_edge_bits, bits);
  }
  return result;
}

}  // namespace mpsketch
