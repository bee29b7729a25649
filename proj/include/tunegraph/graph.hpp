#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tunegraph/errors.hpp"
#include "tunegraph/rng.hpp"

namespace tunegraph {

using VertexId = std::uint32_t;

struct Edge {
  VertexId u;
  VertexId v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct BuildReport {
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

class Graph;
Graph make_graph(std::size_t vertex_count, std::vector<Edge> edges,
                 BuildReport* report = nullptr);

/// Immutable simple undirected graph in compressed adjacency form.
/// Edges are stored once with u < v, sorted; neighbor lists are sorted.
class Graph {
 public:
  Graph() = default;

  std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::size_t degree(VertexId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  std::span<const VertexId> neighbors(VertexId v) const noexcept {
    return {neighbors_.data() + offsets_[v], degree(v)};
  }

  std::span<const Edge> edges() const noexcept { return edges_; }

  bool has_edge(VertexId u, VertexId v) const noexcept {
    if (u >= vertex_count() || v >= vertex_count()) return false;
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> out(vertex_count());
    for (std::size_t v = 0; v < out.size(); ++v) out[v] = degree(static_cast<VertexId>(v));
    return out;
  }

  std::size_t max_degree() const noexcept {
    std::size_t best = 0;
    for (std::size_t v = 0; v < vertex_count(); ++v)
      best = std::max(best, degree(static_cast<VertexId>(v)));
    return best;
  }

  double average_degree() const noexcept {
    return vertex_count() == 0 ? 0.0
                               : 2.0 * static_cast<double>(edge_count()) /
                                     static_cast<double>(vertex_count());
  }

 private:
  friend Graph make_graph(std::size_t, std::vector<Edge>, BuildReport*);

  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> neighbors_;
};

/// Builds a graph on vertices 0..vertex_count-1. Self-loops and repeated
/// pairs (in either orientation) are dropped and counted in `report`.
inline Graph make_graph(std::size_t vertex_count, std::vector<Edge> edges, BuildReport* report) {
  if (vertex_count > std::numeric_limits<VertexId>::max())
    throw ParameterError("vertex count exceeds 32-bit id range");
  BuildReport local;
  std::size_t kept = 0;
  for (auto e : edges) {
    if (e.u >= vertex_count || e.v >= vertex_count)
      throw ParameterError("edge endpoint out of range");
    if (e.u == e.v) {
      ++local.self_loops;
      continue;
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    edges[kept++] = e;
  }
  edges.resize(kept);
  std::sort(edges.begin(), edges.end());
  const auto last = std::unique(edges.begin(), edges.end());
  local.duplicates = static_cast<std::size_t>(edges.end() - last);
  edges.erase(last, edges.end());
  edges.shrink_to_fit();

  Graph g;
  g.offsets_.assign(vertex_count + 1, 0);
  for (const auto& e : edges) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.neighbors_.resize(2 * edges.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (u, v), so filling in this order leaves every
  // neighbor list sorted: smaller neighbors of v arrive via (w, v) pairs first.
  for (const auto& e : edges) g.neighbors_[cursor[e.v]++] = e.u;
  for (const auto& e : edges) g.neighbors_[cursor[e.u]++] = e.v;
  g.edges_ = std::move(edges);
  if (report) *report = local;
  return g;
}

struct BuildResult {
  Graph graph;
  BuildReport report;
  // original_ids[v] is the label vertex v carried in the input.
  std::vector<std::uint64_t> original_ids;
};

/// Incremental graph construction from arbitrary integer labels. Labels are
/// compacted to 0..n-1 in first-seen order. Used directly by streaming
/// ingestion; build_graph is the one-shot form.
class GraphBuilder {
 public:
  void add(std::uint64_t a, std::uint64_t b) {
    const VertexId u = intern(a);
    const VertexId v = intern(b);
    edges_.push_back({u, v});
  }

  void reserve(std::size_t edges) { edges_.reserve(edges); }

  std::size_t vertex_count() const noexcept { return labels_.size(); }

  BuildResult finish() && {
    BuildResult out;
    out.graph = make_graph(labels_.size(), std::move(edges_), &out.report);
    out.original_ids = std::move(labels_);
    ids_.clear();
    return out;
  }

 private:
  VertexId intern(std::uint64_t label) {
    auto [it, inserted] = ids_.try_emplace(label, static_cast<VertexId>(labels_.size()));
    if (inserted) {
      if (labels_.size() >= std::numeric_limits<VertexId>::max())
        throw ParameterError("too many distinct vertex labels");
      labels_.push_back(label);
    }
    return it->second;
  }

  std::unordered_map<std::uint64_t, VertexId> ids_;
  std::vector<std::uint64_t> labels_;
  std::vector<Edge> edges_;
};

inline BuildResult build_graph(std::span<const std::pair<std::uint64_t, std::uint64_t>> pairs) {
  GraphBuilder builder;
  builder.reserve(pairs.size());
  for (const auto& [a, b] : pairs) builder.add(a, b);
  return std::move(builder).finish();
}

/// Degree histogram of a graph. Isolated vertices are included.
class DegreeSequence {
 public:
  DegreeSequence() = default;

  explicit DegreeSequence(const Graph& g) : vertex_count_(g.vertex_count()) {
    counts_.assign(g.max_degree() + 1, 0);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) ++counts_[g.degree(static_cast<VertexId>(v))];
  }

  explicit DegreeSequence(std::span<const std::size_t> degrees) : vertex_count_(degrees.size()) {
    std::size_t top = 0;
    for (auto d : degrees) top = std::max(top, d);
    counts_.assign(top + 1, 0);
    for (auto d : degrees) ++counts_[d];
  }

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t max_degree() const noexcept { return counts_.empty() ? 0 : counts_.size() - 1; }

  /// Number of vertices with exactly degree k.
  std::size_t count(std::size_t k) const noexcept { return k < counts_.size() ? counts_[k] : 0; }

  /// Fraction of vertices with degree >= k.
  double ccdf(std::size_t k) const noexcept {
    if (vertex_count_ == 0) return 0.0;
    std::size_t at_least = 0;
    for (std::size_t d = k; d < counts_.size(); ++d) at_least += counts_[d];
    return static_cast<double>(at_least) / static_cast<double>(vertex_count_);
  }

  /// (degree, ccdf) at every realized degree, ascending.
  std::vector<std::pair<std::size_t, double>> ccdf_points() const {
    std::vector<std::pair<std::size_t, double>> out;
    std::size_t at_least = vertex_count_;
    for (std::size_t d = 0; d < counts_.size(); ++d) {
      if (counts_[d] == 0) continue;
      out.emplace_back(d, static_cast<double>(at_least) / static_cast<double>(vertex_count_));
      at_least -= counts_[d];
    }
    return out;
  }

  const std::vector<std::size_t>& counts() const noexcept { return counts_; }

 private:
  std::size_t vertex_count_ = 0;
  std::vector<std::size_t> counts_;
};

inline double local_clustering(const Graph& g, VertexId v) {
  if (v >= g.vertex_count()) throw ParameterError("vertex id out of range");
  const auto nv = g.neighbors(v);
  const std::size_t k = nv.size();
  if (k < 2) return 0.0;
  std::size_t links = 0;
  for (VertexId u : nv) {
    const auto nu = g.neighbors(u);
    auto a = nv.begin();
    auto b = nu.begin();
    while (a != nv.end() && b != nu.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++links;
        ++a;
        ++b;
      }
    }
  }
  // every adjacent neighbor pair was seen from both sides
  return static_cast<double>(links) / static_cast<double>(k * (k - 1));
}

/// Triangles through each vertex, via degree-ordered forward counting.
inline std::vector<std::size_t> triangles_per_vertex(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> tri(n, 0);
  auto before = [&](VertexId a, VertexId b) {
    const auto da = g.degree(a), db = g.degree(b);
    return da < db || (da == db && a < b);
  };
  std::vector<std::vector<VertexId>> out(n);
  for (const auto& e : g.edges()) {
    if (before(e.u, e.v))
      out[e.u].push_back(e.v);
    else
      out[e.v].push_back(e.u);
  }
  std::vector<std::uint8_t> mark(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    for (VertexId v : out[u]) mark[v] = 1;
    for (VertexId v : out[u])
      for (VertexId w : out[v])
        if (mark[w]) {
          ++tri[u];
          ++tri[v];
          ++tri[w];
        }
    for (VertexId v : out[u]) mark[v] = 0;
  }
  return tri;
}

inline double average_clustering(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) throw GraphError("empty graph");
  const auto tri = triangles_per_vertex(g);
  double sum = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const double k = static_cast<double>(g.degree(static_cast<VertexId>(v)));
    if (k >= 2) sum += 2.0 * static_cast<double>(tri[v]) / (k * (k - 1.0));
  }
  return sum / static_cast<double>(n);
}

/// Uniform edge, uniformly oriented: each (u, v) with uv an edge has
/// probability 1 / (2|E|).
inline std::pair<VertexId, VertexId> sample_edge_endpoint(const Graph& g, Rng& rng) {
  if (g.edge_count() == 0) throw GraphError("graph has no edges");
  const std::uint64_t pick = rng.below(2 * static_cast<std::uint64_t>(g.edge_count()));
  const Edge& e = g.edges()[pick >> 1];
  return (pick & 1) ? std::pair{e.v, e.u} : std::pair{e.u, e.v};
}

}  // namespace tunegraph
