#include "mpsketch/topology.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <sstream>

#include "mpsketch/errors.hpp"
#include "mpsketch/rng.hpp"

namespace mpsketch {

Topology::Topology(std::size_t m, std::vector<Edge> edges)
    : adjacency_(m), connected_(false) {
  if (m == 0) throw ParameterError("topology needs at least one vertex");
  for (Edge& e : edges) {
    if (e.first >= m || e.second >= m) {
      throw ParameterError("edge endpoint out of range");
    }
    if (e.first == e.second) throw ParameterError("self-loops are not allowed");
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw ParameterError("duplicate edge");
  }
  for (const Edge& e : edges) {
    adjacency_[e.first].push_back(e.second);
    adjacency_[e.second].push_back(e.first);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  edges_ = std::move(edges);
  const auto dist = bfs_distances(*this, 0);
  connected_ = std::none_of(dist.begin(), dist.end(),
                            [](std::size_t x) { return x == kUnreachable; });
}

std::vector<std::size_t> bfs_distances(const Topology& g, Vertex source) {
  if (source >= g.vertex_count()) throw TopologyError("source out of range");
  std::vector<std::size_t> dist(g.vertex_count(), kUnreachable);
  std::deque<Vertex> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop_front();
    for (Vertex w : g.neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

namespace {

void require_connected(const Topology& g) {
  if (!g.connected()) throw TopologyError("topology is not connected");
}

}  // namespace

std::size_t eccentricity(const Topology& g, Vertex v) {
  require_connected(g);
  const auto dist = bfs_distances(g, v);
  return *std::max_element(dist.begin(), dist.end());
}

std::size_t diameter(const Topology& g) {
  require_connected(g);
  std::size_t best = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    best = std::max(best, eccentricity(g, v));
  }
  return best;
}

Vertex center(const Topology& g) {
  require_connected(g);
  Vertex best = 0;
  std::size_t best_ecc = kUnreachable;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const std::size_t e = eccentricity(g, v);
    if (e < best_ecc) {
      best_ecc = e;
      best = v;
    }
  }
  return best;
}

std::vector<std::vector<Vertex>> SpanningTree::layers() const {
  std::vector<std::vector<Vertex>> out(depth + 1);
  for (Vertex v = 0; v < layer.size(); ++v) out[layer[v]].push_back(v);
  return out;
}

SpanningTree spanning_tree(const Topology& g, Vertex root) {
  require_connected(g);
  if (root >= g.vertex_count()) throw TopologyError("root out of range");
  const std::size_t m = g.vertex_count();
  SpanningTree t;
  t.root = root;
  t.parent.assign(m, kUnreachable);
  t.children.assign(m, {});
  std::vector<std::size_t> dist(m, kUnreachable);
  std::deque<Vertex> queue{root};
  dist[root] = 0;
  t.parent[root] = root;
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop_front();
    for (Vertex w : g.neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        t.parent[w] = u;
        t.children[u].push_back(w);
        queue.push_back(w);
      }
    }
  }
  t.depth = *std::max_element(dist.begin(), dist.end());
  t.layer.resize(m);
  for (Vertex v = 0; v < m; ++v) t.layer[v] = t.depth - dist[v];
  return t;
}

SpanningTree center_tree(const Topology& g) {
  return spanning_tree(g, center(g));
}

Topology line(std::size_t m) {
  if (m == 0) throw ParameterError("line needs m >= 1");
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < m; ++v) edges.emplace_back(v, v + 1);
  return Topology(m, std::move(edges));
}

Topology star(std::size_t m) {
  if (m == 0) throw ParameterError("star needs m >= 1");
  std::vector<Edge> edges;
  for (Vertex v = 1; v < m; ++v) edges.emplace_back(0, v);
  return Topology(m, std::move(edges));
}

Topology balanced_binary(std::size_t m) {
  if (m == 0) throw ParameterError("tree needs m >= 1");
  std::vector<Edge> edges;
  for (Vertex v = 1; v < m; ++v) edges.emplace_back((v - 1) / 2, v);
  return Topology(m, std::move(edges));
}

Topology grid(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw ParameterError("grid needs rows, cols >= 1");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const Vertex v = i * cols + j;
      if (j + 1 < cols) edges.emplace_back(v, v + 1);
      if (i + 1 < rows) edges.emplace_back(v, v + cols);
    }
  }
  return Topology(rows * cols, std::move(edges));
}

Topology random_connected(std::size_t m, double p_edge, std::uint64_t seed,
                          std::size_t max_attempts) {
  if (m == 0) throw ParameterError("random graph needs m >= 1");
  if (!(p_edge >= 0.0 && p_edge <= 1.0)) {
    throw ParameterError("edge probability must lie in [0, 1]");
  }
  if (m > 1 && p_edge == 0.0) {
    throw ParameterError("edge probability 0 cannot connect m > 1 vertices");
  }
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng(derive_seed(seed, {stream_tag::kTopology, attempt}));
    std::vector<Edge> edges;
    for (Vertex u = 0; u < m; ++u) {
      for (Vertex v = u + 1; v < m; ++v) {
        if (rng.uniform() < p_edge) edges.emplace_back(u, v);
      }
    }
    Topology g(m, std::move(edges));
    if (g.connected()) return g;
  }
  throw ParameterError("no connected G(m, p) draw within the attempt budget");
}

namespace {

std::size_t parse_count(std::string_view token, const char* what) {
  std::size_t value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParameterError(std::string("bad ") + what + ": '" +
                         std::string(token) + "'");
  }
  return value;
}

}  // namespace

Topology parse_topology(const std::string& text) {
  std::istringstream in(text);
  std::string line_text;
  std::size_t m = 0;
  bool have_m = false;
  std::vector<Edge> edges;
  while (std::getline(in, line_text)) {
    if (auto hash = line_text.find('#'); hash != std::string::npos) {
      line_text.resize(hash);
    }
    std::istringstream fields(line_text);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (!have_m) {
      if (tokens.size() != 1) throw ParameterError("first line must be 'm'");
      m = parse_count(tokens[0], "vertex count");
      have_m = true;
      continue;
    }
    if (tokens.size() != 2) throw ParameterError("edge lines must be 'u v'");
    edges.emplace_back(parse_count(tokens[0], "vertex id"),
                       parse_count(tokens[1], "vertex id"));
  }
  if (!have_m) throw ParameterError("topology text is empty");
  return Topology(m, std::move(edges));
}

Topology read_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open topology file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_topology(buffer.str());
  } catch (const ParameterError& e) {
    throw ParameterError(path + ": " + e.what());
  }
}

Topology topology_from_spec(const std::string& spec, std::size_t m,
                            std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  if (kind == "line") return line(m);
  if (kind == "star") return star(m);
  if (kind == "tree") return balanced_binary(m);
  if (kind == "grid") {
    if (arg.empty()) {
      // Most square r x c with r * c = m.
      if (m == 0) throw ParameterError("grid needs m >= 1");
      std::size_t r = 1;
      for (std::size_t d = 1; d * d <= m; ++d) {
        if (m % d == 0) r = d;
      }
      return grid(r, m / r);
    }
    const auto x = arg.find('x');
    if (x == std::string::npos) throw ParameterError("grid spec is grid:RxC");
    return grid(parse_count(std::string_view(arg).substr(0, x), "grid rows"),
                parse_count(std::string_view(arg).substr(x + 1), "grid cols"));
  }
  if (kind == "random") {
    double p = 0.2;
    if (!arg.empty()) {
      try {
        p = std::stod(arg);
      } catch (const std::exception&) {
        throw ParameterError("bad edge probability '" + arg + "'");
      }
    }
    return random_connected(m, p, seed);
  }
  if (kind == "file") return read_topology(arg);
  throw ParameterError("unknown topology '" + spec + "'");
}

}  // namespace mpsketch
