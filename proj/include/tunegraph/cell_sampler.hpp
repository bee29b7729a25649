#pragma once

// Expected-linear-time sampling of geometric edges for kernels dominated by
// a classical GIRG kernel min{c w'_u w'_v / (W' dist^d), 1}^alpha.
//
// Vertices are grouped into weight layers [w0 2^i, w0 2^(i+1)) of the
// dominating weights w'. Space is refined into a hierarchy of 2^(l d) cells
// (Morton order, so a cell at level l is a contiguous code range at any finer
// level). Every layer pair (i, j) gets a target level: the finest level whose
// cell volume still covers c wb_i wb_j / W'. A pair of vertices is then
// handled exactly once:
//   - its cells touch at the target level of its layers: the pair is tested
//     directly ("type I");
//   - otherwise there is a first level at which its cells stop touching; the
//     cell pair at that level is sampled with geometric jumps at an upper
//     bound from the cell box distance and thinned to the exact
//     probability ("type II").
// Each cell pair draws from its own RNG stream derived from its (level, code,
// code) identity, so the output does not depend on the traversal schedule.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tunegraph/graph.hpp"
#include "tunegraph/model.hpp"
#include "tunegraph/parallel.hpp"
#include "tunegraph/rng.hpp"

namespace tunegraph {

struct CellSamplerStats {
  std::uint64_t type1_pairs = 0;      // vertex pairs tested directly
  std::uint64_t type2_candidates = 0;  // pairs proposed by geometric jumps
  std::uint64_t accepted = 0;
  int layers = 0;
  int max_level = 0;

  CellSamplerStats& operator+=(const CellSamplerStats& o) {
    type1_pairs += o.type1_pairs;
    type2_candidates += o.type2_candidates;
    accepted += o.accepted;
    return *this;
  }
};

namespace detail {

class MortonGrid {
 public:
  explicit MortonGrid(int dim) : dim_(dim) {}

  int dim() const noexcept { return dim_; }

  std::uint64_t encode(std::span<const double> x, int level) const noexcept {
    std::uint64_t code = 0;
    const double cells = std::ldexp(1.0, level);
    std::uint64_t coord[64];
    for (int k = 0; k < dim_; ++k) {
      auto c = static_cast<std::uint64_t>(x[static_cast<std::size_t>(k)] * cells);
      coord[k] = std::min<std::uint64_t>(c, (std::uint64_t{1} << level) - 1);
    }
    for (int b = level - 1; b >= 0; --b)
      for (int k = 0; k < dim_; ++k) code = (code << 1) | ((coord[k] >> b) & 1U);
    return code;
  }

  void decode(std::uint64_t code, int level, std::uint64_t* coord) const noexcept {
    for (int k = 0; k < dim_; ++k) coord[k] = 0;
    for (int b = 0; b < level; ++b)
      for (int k = dim_ - 1; k >= 0; --k) {
        coord[k] |= (code & 1U) << b;
        code >>= 1;
      }
  }

  /// Largest per-axis cyclic index gap between two cells at `level`.
  std::uint64_t max_gap(std::uint64_t a, std::uint64_t b, int level) const noexcept {
    std::uint64_t ca[64], cb[64];
    decode(a, level, ca);
    decode(b, level, cb);
    const std::uint64_t m = std::uint64_t{1} << level;
    std::uint64_t gap = 0;
    for (int k = 0; k < dim_; ++k) {
      const std::uint64_t diff = ca[k] > cb[k] ? ca[k] - cb[k] : cb[k] - ca[k];
      gap = std::max(gap, std::min(diff, m - diff));
    }
    return gap;
  }

  bool touching(std::uint64_t a, std::uint64_t b, int level) const noexcept {
    return level <= 1 || max_gap(a, b, level) <= 1;
  }

  /// Lower bound on the torus max-norm distance between points of the cells.
  double box_distance(std::uint64_t a, std::uint64_t b, int level) const noexcept {
    const std::uint64_t gap = max_gap(a, b, level);
    return gap <= 1 ? 0.0 : std::ldexp(static_cast<double>(gap - 1), -level);
  }

 private:
  int dim_;
};

template <class Target>
class CellSampler {
 public:
  CellSampler(const PositionMatrix& pos, std::span<const double> dom_weights, double dom_total,
              double scale, double alpha, const Target& target, std::uint64_t seed)
      : pos_(pos),
        grid_(pos.dim),
        scale_(scale),
        alpha_(alpha),
        dom_total_(dom_total),
        target_(target),
        seed_(seed) {
    build(dom_weights);
  }

  std::vector<Edge> run(unsigned workers, CellSamplerStats* stats) {
    std::vector<Edge> edges;
    CellSamplerStats total;
    total.layers = static_cast<int>(layers_.size());
    total.max_level = deepest_;
    if (pos_.size() < 2) {
      if (stats) *stats = total;
      return edges;
    }
    // Coarse levels are walked serially; touching pairs at the task level
    // become independent tasks.
    int task_level = 0;
    while (task_level < deepest_ && (std::uint64_t{1} << (task_level * grid_.dim())) < 64) ++task_level;

    Worker coarse(*this);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> tasks;
    coarse.descend(0, 0, 0, task_level, &tasks);

    std::vector<Worker> outputs(tasks.size(), Worker(*this));
    parallel_for(tasks.size(), workers, [&](std::size_t t) {
      outputs[t].descend(tasks[t].first, tasks[t].second, task_level, deepest_ + 1, nullptr);
    });

    std::size_t count = coarse.edges.size();
    for (auto& w : outputs) count += w.edges.size();
    edges.reserve(count);
    edges.insert(edges.end(), coarse.edges.begin(), coarse.edges.end());
    total += coarse.stats;
    for (auto& w : outputs) {
      edges.insert(edges.end(), w.edges.begin(), w.edges.end());
      total += w.stats;
    }
    if (stats) *stats = total;
    return edges;
  }

 private:
  struct Layer {
    double upper = 0.0;  // exclusive weight bound
    int level = 0;       // finest level any pair involving this layer needs
    std::vector<VertexId> vertices;  // sorted by Morton code at `level`
    std::vector<std::uint32_t> prefix;  // prefix[c] = first index in cell c
  };

  struct Range {
    const VertexId* begin;
    std::size_t size;
  };

  Range range(int layer, int level, std::uint64_t cell) const noexcept {
    const Layer& L = layers_[static_cast<std::size_t>(layer)];
    const int shift = grid_.dim() * (L.level - level);
    const std::uint64_t lo = cell << shift, hi = (cell + 1) << shift;
    return {L.vertices.data() + L.prefix[lo], L.prefix[hi] - L.prefix[lo]};
  }

  int pair_level(int i, int j) const noexcept {
    return pair_level_[static_cast<std::size_t>(i) * layers_.size() + static_cast<std::size_t>(j)];
  }

  void build(std::span<const double> w) {
    const std::size_t n = pos_.size();
    const int d = grid_.dim();
    if (n == 0) return;
    double w0 = w[0];
    for (double x : w) w0 = std::min(w0, x);
    std::vector<int> layer_of(n);
    int layer_count = 1;
    for (std::size_t v = 0; v < n; ++v) {
      int i = static_cast<int>(std::floor(std::log2(w[v] / w0)));
      i = std::max(i, 0);
      // guard against rounding at the layer boundary
      while (w[v] >= std::ldexp(w0, i + 1)) ++i;
      while (i > 0 && w[v] < std::ldexp(w0, i)) --i;
      layer_of[v] = i;
      layer_count = std::max(layer_count, i + 1);
    }
    max_level_ = std::max(0, static_cast<int>(std::floor(std::log2(static_cast<double>(n)) / d)));
    max_level_ = std::min(max_level_, 60 / d);
    layers_.assign(static_cast<std::size_t>(layer_count), Layer{});
    for (int i = 0; i < layer_count; ++i) layers_[static_cast<std::size_t>(i)].upper = std::ldexp(w0, i + 1);

    pair_level_.assign(static_cast<std::size_t>(layer_count * layer_count), 0);
    deepest_ = 0;
    for (int i = 0; i < layer_count; ++i)
      for (int j = 0; j < layer_count; ++j) {
        const double vol =
            scale_ * layers_[static_cast<std::size_t>(i)].upper * layers_[static_cast<std::size_t>(j)].upper / dom_total_;
        int level = vol >= 1.0 ? 0 : static_cast<int>(std::floor(-std::log2(vol) / d));
        level = std::clamp(level, 0, max_level_);
        // the cell volume at the chosen level must cover vol
        while (level > 0 && std::ldexp(1.0, -level * d) < vol) --level;
        pair_level_[static_cast<std::size_t>(i * layer_count + j)] = level;
        deepest_ = std::max(deepest_, level);
      }
    for (int i = 0; i < layer_count; ++i) {
      int lv = 0;
      for (int j = 0; j < layer_count; ++j) lv = std::max(lv, pair_level(i, j));
      layers_[static_cast<std::size_t>(i)].level = lv;
    }

    std::vector<std::uint64_t> code(n);
    for (std::size_t v = 0; v < n; ++v)
      code[v] = grid_.encode(pos_.point(v), layers_[static_cast<std::size_t>(layer_of[v])].level);
    for (std::size_t v = 0; v < n; ++v)
      layers_[static_cast<std::size_t>(layer_of[v])].vertices.push_back(static_cast<VertexId>(v));
    for (auto& L : layers_) {
      std::stable_sort(L.vertices.begin(), L.vertices.end(),
                       [&](VertexId a, VertexId b) { return code[a] < code[b]; });
      const std::uint64_t cells = std::uint64_t{1} << (d * L.level);
      L.prefix.assign(cells + 1, 0);
      for (VertexId v : L.vertices) ++L.prefix[code[v] + 1];
      for (std::uint64_t c = 0; c < cells; ++c) L.prefix[c + 1] += L.prefix[c];
    }

    // For each level l, the layer pairs (i <= j) whose target level is
    // exactly l (type I) and at least l (type II candidates).
    exact_pairs_.assign(static_cast<std::size_t>(deepest_ + 2), {});
    for (int i = 0; i < layer_count; ++i)
      for (int j = i; j < layer_count; ++j)
        exact_pairs_[static_cast<std::size_t>(pair_level(i, j))].emplace_back(i, j);
  }

  double jump_bound(int i, int j, double box_dist) const noexcept {
    const double x = scale_ * layers_[static_cast<std::size_t>(i)].upper *
                     layers_[static_cast<std::size_t>(j)].upper /
                     (dom_total_ * int_pow(box_dist, grid_.dim()));
    if (std::isinf(alpha_)) return x >= 1.0 ? 1.0 : 0.0;
    return x >= 1.0 ? 1.0 : std::pow(x, alpha_);
  }

  struct Worker {
    explicit Worker(const CellSampler& s) : self(&s) {}

    const CellSampler* self;
    std::vector<Edge> edges;
    CellSamplerStats stats;

    void test(VertexId u, VertexId v, Rng& rng) {
      ++stats.type1_pairs;
      const double dist = torus_distance(self->pos_.point(u), self->pos_.point(v));
      const double p = self->target_(u, v, dist);
      if (p >= 1.0 || (p > 0.0 && rng.uniform() < p)) {
        edges.push_back({u, v});
        ++stats.accepted;
      }
    }

    void type1(std::uint64_t a, std::uint64_t b, int level, Rng& rng) {
      for (auto [i, j] : self->exact_pairs_[static_cast<std::size_t>(level)]) {
        if (a == b) {
          const Range P = self->range(i, level, a);
          if (P.size == 0) continue;
          if (i == j) {
            for (std::size_t x = 0; x < P.size; ++x)
              for (std::size_t y = x + 1; y < P.size; ++y) test(P.begin[x], P.begin[y], rng);
          } else {
            const Range Q = self->range(j, level, a);
            for (std::size_t x = 0; x < P.size; ++x)
              for (std::size_t y = 0; y < Q.size; ++y) test(P.begin[x], Q.begin[y], rng);
          }
        } else {
          cross(self->range(i, level, a), self->range(j, level, b), rng);
          if (i != j) cross(self->range(j, level, a), self->range(i, level, b), rng);
        }
      }
    }

    void cross(Range P, Range Q, Rng& rng) {
      for (std::size_t x = 0; x < P.size; ++x)
        for (std::size_t y = 0; y < Q.size; ++y) test(P.begin[x], Q.begin[y], rng);
    }

    void type2(std::uint64_t a, std::uint64_t b, int level) {
      // Threshold kernels: every pair in non-touching cells at or above its
      // target level is strictly beyond the connection radius.
      if (std::isinf(self->alpha_)) return;
      const double box = self->grid_.box_distance(a, b, level);
      bool seeded = false;
      Rng rng;
      const auto layer_count = static_cast<int>(self->layers_.size());
      for (int i = 0; i < layer_count; ++i) {
        if (self->layers_[static_cast<std::size_t>(i)].level < level) continue;
        const Range P = self->range(i, level, a);
        if (P.size == 0) continue;
        for (int j = 0; j < layer_count && self->pair_level(i, j) >= level; ++j) {
          const Range Q = self->range(j, level, b);
          if (Q.size == 0) continue;
          const double bound = self->jump_bound(i, j, box);
          if (bound <= 0.0) continue;
          if (!seeded) {
            rng.reseed(derive_seed(self->seed_, {2, static_cast<std::uint64_t>(level), a, b}));
            seeded = true;
          }
          const std::uint64_t total = static_cast<std::uint64_t>(P.size) * Q.size;
          std::uint64_t idx = rng.geometric_skip(bound);
          while (idx < total) {
            const VertexId u = P.begin[idx / Q.size];
            const VertexId v = Q.begin[idx % Q.size];
            ++stats.type2_candidates;
            const double dist = torus_distance(self->pos_.point(u), self->pos_.point(v));
            const double p = self->target_(u, v, dist);
            if (p > 0.0 && rng.uniform() * bound < p) {
              edges.push_back({u, v});
              ++stats.accepted;
            }
            const std::uint64_t skip = rng.geometric_skip(bound);
            if (skip >= total) break;
            idx += 1 + skip;
          }
        }
      }
    }

    // Handles the touching pair (a, b) at `level` and everything below it.
    // Touching pairs reaching `stop_level` are handed back as tasks instead.
    void descend(std::uint64_t a, std::uint64_t b, int level, int stop_level,
                 std::vector<std::pair<std::uint64_t, std::uint64_t>>* tasks) {
      if (level == stop_level && tasks) {
        tasks->emplace_back(a, b);
        return;
      }
      Rng rng(derive_seed(self->seed_, {1, static_cast<std::uint64_t>(level), a, b}));
      type1(a, b, level, rng);
      if (level >= self->deepest_) return;
      const int d = self->grid_.dim();
      const std::uint64_t kids = std::uint64_t{1} << d;
      for (std::uint64_t s = 0; s < kids; ++s)
        for (std::uint64_t t = (a == b ? s : 0); t < kids; ++t) {
          const std::uint64_t ca = (a << d) | s, cb = (b << d) | t;
          if (self->grid_.touching(ca, cb, level + 1))
            descend(ca, cb, level + 1, stop_level, tasks);
          else
            type2(ca, cb, level + 1);
        }
    }
  };

  const PositionMatrix& pos_;
  MortonGrid grid_;
  double scale_;
  double alpha_;
  double dom_total_;
  const Target& target_;
  std::uint64_t seed_;
  int max_level_ = 0;
  int deepest_ = 0;
  std::vector<Layer> layers_;
  std::vector<int> pair_level_;
  std::vector<std::vector<std::pair<int, int>>> exact_pairs_;
};

}  // namespace detail

/// Samples edges with probability target(u, v, dist) for every vertex pair,
/// where target must be dominated by the GIRG kernel on `dom_weights`
/// (total `dom_total`) with constant `scale` and exponent `alpha`.
template <class Target>
std::vector<Edge> sample_dominated_geometric_edges(const PositionMatrix& pos,
                                                   std::span<const double> dom_weights,
                                                   double dom_total, double scale, double alpha,
                                                   const Target& target, std::uint64_t seed,
                                                   unsigned workers = 1,
                                                   CellSamplerStats* stats = nullptr) {
  if (dom_weights.size() != pos.size()) throw ParameterError("weights and positions differ in size");
  if (pos.dim > 32) throw ParameterError("dimension above 32 is not supported");
  detail::CellSampler<Target> sampler(pos, dom_weights, dom_total, scale, alpha, target, seed);
  return sampler.run(workers, stats);
}

}  // namespace tunegraph
