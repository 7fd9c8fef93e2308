#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hitwalk {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph in compressed adjacency form. Immutable after
/// construction; neighbor lists are sorted strictly increasing, so symmetry,
/// loop-freeness and the degree sum are checked once up front and every
/// algorithm may rely on them.
class Graph {
 public:
  Graph() = default;

  /// Build from an edge list. Accepts (u,v) in either order, rejects
  /// self-loops, duplicate edges and out-of-range endpoints.
  static Graph from_edges(std::size_t n, const std::vector<Edge>& edges) {
    if (n == 0) throw std::invalid_argument("graph must have at least one vertex");
    std::vector<std::uint32_t> deg(n, 0);
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
      if (u == v) throw std::invalid_argument("self-loop not allowed");
      ++deg[u];
      ++deg[v];
    }
    Graph g;
    g.offsets_.resize(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
    g.neighbors_.resize(g.offsets_[n]);
    std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
      g.neighbors_[cursor[u]++] = v;
      g.neighbors_[cursor[v]++] = u;
    }
    for (std::size_t v = 0; v < n; ++v) {
      auto begin = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
      auto end = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
      std::sort(begin, end);
      if (std::adjacent_find(begin, end) != end)
        throw std::invalid_argument("duplicate edge");
    }
    g.edge_count_ = edges.size();
    g.check_invariants();
    return g;
  }

  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::uint64_t edge_count() const { return edge_count_; }

  std::uint32_t degree(Vertex v) const {
    return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
  }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }

  bool has_edge(Vertex u, Vertex v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Edges as (u, v) with u < v, lexicographically sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < vertex_count(); ++u)
      for (Vertex v : neighbors(u))
        if (v > u) out.emplace_back(u, v);
    return out;
  }

  std::uint32_t min_degree() const {
    std::uint32_t d = ~0u;
    for (Vertex v = 0; v < vertex_count(); ++v) d = std::min(d, degree(v));
    return d;
  }

  std::uint32_t max_degree() const {
    std::uint32_t d = 0;
    for (Vertex v = 0; v < vertex_count(); ++v) d = std::max(d, degree(v));
    return d;
  }

 private:
  void check_invariants() const {
    const std::size_t n = vertex_count();
    std::uint64_t degsum = 0;
    for (Vertex v = 0; v < n; ++v) {
      auto nb = neighbors(v);
      degsum += nb.size();
      for (std::size_t i = 0; i < nb.size(); ++i) {
        if (nb[i] == v) throw std::logic_error("self-loop in adjacency");
        if (i > 0 && nb[i] <= nb[i - 1])
          throw std::logic_error("neighbor list not strictly increasing");
        if (!has_edge(nb[i], v)) throw std::logic_error("adjacency not symmetric");
      }
    }
    if (degsum != 2 * edge_count_) throw std::logic_error("degree sum != 2m");
  }

  std::vector<std::uint64_t> offsets_;
  std::vector<Vertex> neighbors_;
  std::uint64_t edge_count_ = 0;
};

constexpr std::int32_t kUnreached = -1;

/// BFS distances from src; unreached vertices get kUnreached.
inline std::vector<std::int32_t> bfs_distances(const Graph& g, Vertex src) {
  std::vector<std::int32_t> dist(g.vertex_count(), kUnreached);
  std::vector<Vertex> queue;
  queue.reserve(g.vertex_count());
  dist[src] = 0;
  queue.push_back(src);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex u = queue[head];
    for (Vertex w : g.neighbors(u)) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

inline bool is_connected(const Graph& g) {
  if (g.vertex_count() == 0) return false;
  auto dist = bfs_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(),
                      [](std::int32_t d) { return d == kUnreached; });
}

/// BFS 2-coloring over all components.
inline bool is_bipartite(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::int8_t> color(n, -1);
  std::vector<Vertex> queue;
  for (Vertex s = 0; s < n; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    queue.clear();
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex u = queue[head];
      for (Vertex w : g.neighbors(u)) {
        if (color[w] == -1) {
          color[w] = static_cast<std::int8_t>(1 - color[u]);
          queue.push_back(w);
        } else if (color[w] == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

/// Exact diameter via a BFS sweep from every vertex; nullopt when the graph
/// is disconnected.
inline std::optional<std::int32_t> diameter(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return std::nullopt;
  std::int32_t best = 0;
  for (Vertex s = 0; s < n; ++s) {
    auto dist = bfs_distances(g, s);
    for (std::int32_t d : dist) {
      if (d == kUnreached) return std::nullopt;
      best = std::max(best, d);
    }
  }
  return best;
}

/// |N(v) ∩ N(w)| by merging the two sorted neighbor lists.
inline std::uint32_t codegree(const Graph& g, Vertex v, Vertex w) {
  if (v == w) throw std::invalid_argument("codegree requires distinct vertices");
  auto a = g.neighbors(v);
  auto b = g.neighbors(w);
  std::uint32_t count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (a[i] > b[j]) ++j;
    else { ++count; ++i; ++j; }
  }
  return count;
}

}  // namespace hitwalk
