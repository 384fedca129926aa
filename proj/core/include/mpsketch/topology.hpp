#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mpsketch {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;

/// Undirected simple graph on vertices 0..m-1. Edges are stored with
/// first < second and sorted; adjacency lists are sorted by vertex id.
class Topology {
 public:
  /// Throws ParameterError on self-loops, duplicates, or out-of-range ids.
  Topology(std::size_t m, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return adjacency_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Vertex>& neighbors(Vertex v) const {
    return adjacency_.at(v);
  }
  bool connected() const noexcept { return connected_; }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
  bool connected_;
};

inline constexpr std::size_t kUnreachable = static_cast<std::size_t>(-1);

/// Hop distances from `source`; kUnreachable where no path exists.
std::vector<std::size_t> bfs_distances(const Topology& g, Vertex source);

/// Throws TopologyError if g is disconnected.
std::size_t eccentricity(const Topology& g, Vertex v);
std::size_t diameter(const Topology& g);

/// Vertex of minimal eccentricity, smallest id on ties.
Vertex center(const Topology& g);

/// Shortest-path tree. layer[v] = depth - dist(root, v), so the root sits in
/// layer `depth` and the deepest vertices in layer 0.
struct SpanningTree {
  Vertex root = 0;
  std::vector<Vertex> parent;  // parent[root] == root
  std::vector<std::vector<Vertex>> children;  // sorted by id
  std::vector<std::size_t> layer;
  std::size_t depth = 0;

  std::size_t vertex_count() const noexcept { return parent.size(); }
  /// layers()[t] lists the vertices of layer t in id order.
  std::vector<std::vector<Vertex>> layers() const;
};

/// BFS from `root`, visiting neighbors in id order (so each vertex's parent
/// is its smallest-id neighbor one hop closer to the root).
SpanningTree spanning_tree(const Topology& g, Vertex root);

/// Tree rooted at the center of g.
SpanningTree center_tree(const Topology& g);

Topology line(std::size_t m);
/// Vertex 0 is the hub.
Topology star(std::size_t m);
/// Heap-ordered: children of v are 2v+1 and 2v+2.
Topology balanced_binary(std::size_t m);
/// Row-major ids; vertex (i, j) is i * cols + j.
Topology grid(std::size_t rows, std::size_t cols);
/// G(m, p_edge) conditioned on connectivity by rejection (at most
/// `max_attempts` draws, then ParameterError).
Topology random_connected(std::size_t m, double p_edge, std::uint64_t seed,
                          std::size_t max_attempts = 1000);

/// Text format: first line "m", then one "u v" edge per line. '#' starts a
/// comment.
Topology read_topology(const std::string& path);
Topology parse_topology(const std::string& text);

/// Builds a graph from a CLI spec: line, star, tree, grid:RxC, random[:p],
/// file:PATH. Plain "grid" is the most square r x c = m; `m` is ignored
/// for grid:RxC and file specs.
Topology topology_from_spec(const std::string& spec, std::size_t m,
                            std::uint64_t seed);

}  // namespace mpsketch
