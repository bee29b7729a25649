#pragma once

// Small named graphs and independent reference computations for tests.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "tunegraph/graph.hpp"
#include "tunegraph/rng.hpp"

namespace fixtures {

using tunegraph::Edge;
using tunegraph::Graph;
using tunegraph::VertexId;

inline Graph from_pairs(std::size_t n, std::vector<std::pair<int, int>> pairs) {
  std::vector<Edge> edges;
  for (auto [a, b] : pairs) edges.push_back({static_cast<VertexId>(a), static_cast<VertexId>(b)});
  return tunegraph::make_graph(n, std::move(edges));
}

inline Graph path(std::size_t n) {
  std::vector<std::pair<int, int>> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
  return from_pairs(n, e);
}

inline Graph cycle(std::size_t n) {
  std::vector<std::pair<int, int>> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(static_cast<int>(i), static_cast<int>((i + 1) % n));
  return from_pairs(n, e);
}

inline Graph star(std::size_t leaves) {
  std::vector<std::pair<int, int>> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, static_cast<int>(i));
  return from_pairs(leaves + 1, e);
}

inline Graph complete(std::size_t n) {
  std::vector<std::pair<int, int>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return from_pairs(n, e);
}

// K2 on {0,1} plus K3 on {2,3,4}
inline Graph k2_k3() { return from_pairs(5, {{0, 1}, {2, 3}, {3, 4}, {2, 4}}); }

inline Graph k4_minus_edge() { return from_pairs(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}); }

/// G(n, m)-style random multigraph input; build drops repeats.
inline Graph random_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  tunegraph::Rng rng(seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < m; ++i)
    edges.push_back({static_cast<VertexId>(rng.below(n)), static_cast<VertexId>(rng.below(n))});
  return tunegraph::make_graph(n, std::move(edges));
}

/// Graph with a heavy-tailed degree profile: vertex i attaches to ~1 + c/i^a partners.
inline Graph skewed_graph(std::size_t n, std::uint64_t seed) {
  tunegraph::Rng rng(seed);
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < n; ++v) {
    const auto k = 1 + static_cast<std::size_t>(static_cast<double>(n) / 4.0 / static_cast<double>(v + 1));
    for (std::size_t j = 0; j < k; ++j)
      edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>(rng.below(n))});
  }
  return tunegraph::make_graph(n, std::move(edges));
}

inline Graph relabel(const Graph& g, const std::vector<VertexId>& perm) {
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) edges.push_back({perm[e.u], perm[e.v]});
  return tunegraph::make_graph(g.vertex_count(), std::move(edges));
}

inline std::vector<VertexId> random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<VertexId> p(n);
  std::iota(p.begin(), p.end(), 0);
  tunegraph::Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

/// Local clustering straight from the definition with an adjacency matrix.
inline double clustering_reference(const Graph& g, VertexId v) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& e : g.edges()) adj[e.u][e.v] = adj[e.v][e.u] = true;
  std::vector<VertexId> nb;
  for (std::size_t u = 0; u < n; ++u)
    if (adj[v][u]) nb.push_back(static_cast<VertexId>(u));
  if (nb.size() < 2) return 0.0;
  std::size_t links = 0;
  for (std::size_t i = 0; i < nb.size(); ++i)
    for (std::size_t j = i + 1; j < nb.size(); ++j) links += adj[nb[i]][nb[j]];
  return static_cast<double>(links) / (static_cast<double>(nb.size() * (nb.size() - 1)) / 2.0);
}

}  // namespace fixtures
