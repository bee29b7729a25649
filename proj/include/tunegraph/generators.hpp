#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "tunegraph/cell_sampler.hpp"
#include "tunegraph/errors.hpp"
#include "tunegraph/graph.hpp"
#include "tunegraph/model.hpp"
#include "tunegraph/parallel.hpp"
#include "tunegraph/rng.hpp"

namespace tunegraph {

// Stream tags under the instance seed.
namespace stream {
inline constexpr std::uint64_t weights = 1;
inline constexpr std::uint64_t positions = 2;
inline constexpr std::uint64_t edges = 3;
}  // namespace stream

inline constexpr std::size_t kDefaultNaiveCap = 20000;

struct GenerateOptions {
  unsigned workers = 1;
  bool naive = false;
  std::size_t naive_cap = kDefaultNaiveCap;
};

struct GeneratedGraph {
  Graph graph;
  WeightVector weights;
  PositionMatrix positions;
  double scale = 1.0;
  CellSamplerStats stats;
};

struct Latents {
  WeightVector weights;
  PositionMatrix positions;
};

/// Weights and positions of the instance identified by params.seed. Both
/// are drawn from their own streams, so they do not depend on the sampler.
inline Latents sample_latents(const ModelParams& p) {
  Latents out;
  if (p.weighted()) {
    Rng rng(derive_seed(p.seed, {stream::weights}));
    out.weights = sample_weights(p.n, p.tau, rng);
  } else {
    out.weights = WeightVector(std::vector<double>(p.n, 1.0));
  }
  if (p.geometric()) {
    Rng rng(derive_seed(p.seed, {stream::positions}));
    out.positions = sample_positions(p.n, p.dim, rng);
  }
  return out;
}

/// Reference sampler: one Bernoulli trial per unordered pair.
inline Graph generate_naive(const ModelParams& p, const WeightVector& w, const PositionMatrix& pos,
                            double scale, Rng& rng, std::size_t cap = kDefaultNaiveCap) {
  p.validate();
  const std::size_t n = p.model == Model::rgg ? pos.size() : w.size();
  if (n > cap)
    throw ParameterError("naive sampler is capped at " + std::to_string(cap) +
                         " vertices; use the fast sampler");
  if (p.geometric() && pos.size() != n) throw ParameterError("positions missing for geometric model");
  if (p.model != Model::rgg && w.size() != n) throw ParameterError("weights missing");
  std::vector<Edge> edges;
  const Kernel kernel = Kernel::from(p, scale, w.total);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      const double dist = p.geometric() ? torus_distance(pos.point(u), pos.point(v)) : 0.0;
      const double prob = p.model == Model::rgg ? (dist <= p.rgg_radius ? 1.0 : 0.0)
                                                : kernel(w[u], w[v], dist);
      if (prob >= 1.0 || (prob > 0.0 && rng.uniform() < prob))
        edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
    }
  return make_graph(n, std::move(edges));
}

/// Threshold graph: u ~ v iff torus max-norm distance <= r.
inline Graph rgg_from_positions(const PositionMatrix& pos, double r) {
  if (!(r > 0.0 && r <= 0.5)) throw ParameterError("rgg radius must lie in (0, 1/2]");
  const std::size_t n = pos.size();
  if (n < 2) return make_graph(n, {});
  const int d = pos.dim;
  // Cells of side >= r, so neighbors live in adjacent cells.
  const double per_axis_cap = std::floor(std::pow(static_cast<double>(n), 1.0 / d)) + 1.0;
  const auto m = static_cast<std::uint64_t>(std::max(1.0, std::min(std::floor(1.0 / r), per_axis_cap)));
  std::vector<std::uint64_t> cell(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::uint64_t id = 0;
    for (int k = 0; k < d; ++k) {
      auto c = static_cast<std::uint64_t>(pos.point(v)[static_cast<std::size_t>(k)] * static_cast<double>(m));
      id = id * m + std::min(c, m - 1);
    }
    cell[v] = id;
  }
  std::uint64_t cells = 1;
  for (int k = 0; k < d; ++k) cells *= m;
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return cell[a] < cell[b]; });
  std::vector<std::size_t> start(cells + 1, 0);
  for (std::size_t v = 0; v < n; ++v) ++start[cell[v] + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());

  std::vector<Edge> edges;
  std::vector<std::uint64_t> coord(static_cast<std::size_t>(d)), near;
  for (std::uint64_t a = 0; a < cells; ++a) {
    if (start[a] == start[a + 1]) continue;
    std::uint64_t rest = a;
    for (int k = d - 1; k >= 0; --k) {
      coord[static_cast<std::size_t>(k)] = rest % m;
      rest /= m;
    }
    near.clear();
    std::uint64_t combos = 1;
    for (int k = 0; k < d; ++k) combos *= 3;
    for (std::uint64_t t = 0; t < combos; ++t) {
      std::uint64_t id = 0, digits = t;
      for (int k = 0; k < d; ++k) {
        const auto off = static_cast<std::int64_t>(digits % 3) - 1;
        digits /= 3;
        const auto c = static_cast<std::int64_t>(coord[static_cast<std::size_t>(k)]) + off;
        const auto mm = static_cast<std::int64_t>(m);
        id = id * m + static_cast<std::uint64_t>(((c % mm) + mm) % mm);
      }
      if (id >= a) near.push_back(id);
    }
    std::sort(near.begin(), near.end());
    near.erase(std::unique(near.begin(), near.end()), near.end());
    for (std::uint64_t b : near) {
      for (std::size_t x = start[a]; x < start[a + 1]; ++x) {
        const VertexId u = order[x];
        for (std::size_t y = (a == b ? x + 1 : start[b]); y < start[b + 1]; ++y) {
          const VertexId v = order[y];
          if (torus_distance(pos.point(u), pos.point(v)) <= r) edges.push_back({u, v});
        }
      }
    }
  }
  return make_graph(n, std::move(edges));
}

inline Graph generate_rgg(std::size_t n, int d, double r, Rng& rng) {
  if (!(r > 0.0 && r <= 0.5)) throw ParameterError("rgg radius must lie in (0, 1/2]");
  const PositionMatrix pos = sample_positions(n, d, rng);
  return rgg_from_positions(pos, r);
}

/// Weights of a classical GIRG whose kernel dominates the tunable kernel
/// with exponent sigma on the smaller weight.
///
/// sigma < 1: w'_v = w_v * w_min^(sigma-1).
/// sigma > 1: w''_v = w_v * min{theta, w_v}^((sigma-1)/2) and
///            w'_v = w''_v * W''/W, with theta = (W / K)^(1/(sigma+1)).
///
/// K is the least factor by which the dominating kernel exceeds
/// w'_u w'_v / W' over all distances: the kernel constant c without geometry
/// and c 2^d on the torus, where distances are at most 1/2. Pairs whose
/// weights both exceed theta then have w'_u w'_v / W' >= 1/K and connect with
/// probability 1 in the dominating graph.
inline WeightVector supergraph_weights(const WeightVector& w, double sigma, double kernel_constant = 1.0) {
  if (!(sigma >= 0.0)) throw ParameterError("sigma must be >= 0");
  if (!(kernel_constant > 0.0)) throw ParameterError("kernel constant must be positive");
  if (w.size() == 0 || sigma == 1.0) return w;
  std::vector<double> out(w.values);
  if (sigma < 1.0) {
    const double w_min = *std::min_element(w.values.begin(), w.values.end());
    const double factor = std::pow(w_min, sigma - 1.0);
    for (auto& x : out) x *= factor;
    return WeightVector(std::move(out));
  }
  const double theta = std::pow(w.total / kernel_constant, 1.0 / (sigma + 1.0));
  const double half = (sigma - 1.0) / 2.0;
  for (auto& x : out) x *= std::pow(std::min(theta, x), half);
  double aux_total = 0.0;
  for (double x : out) aux_total += x;
  const double rescale = aux_total / w.total;
  for (auto& x : out) x *= rescale;
  return WeightVector(std::move(out));
}

/// Exact sampler for the geometric models given latents: a GIRG supergraph
/// on dominating weights is enumerated cell by cell and every candidate is
/// accepted with the target probability. Marginals equal generate_naive.
inline Graph sample_geometric_edges(const ModelParams& p, const WeightVector& w, const PositionMatrix& pos,
                                    double scale, std::uint64_t edge_seed, unsigned workers = 1,
                                    CellSamplerStats* stats = nullptr) {
  p.validate();
  if (!(p.model == Model::girg || p.model == Model::tgirg))
    throw ParameterError("geometric sampler requires girg or tgirg");
  if (pos.size() != w.size()) throw ParameterError("weights and positions differ in size");
  const double sigma = p.effective_sigma();
  const WeightVector dom = supergraph_weights(w, sigma, scale * std::ldexp(1.0, p.dim));
  const Kernel kernel = Kernel::from(p, scale, w.total);
  const double* wv = w.values.data();
  auto target = [kernel, wv](VertexId u, VertexId v, double dist) { return kernel(wv[u], wv[v], dist); };
  auto edges = sample_dominated_geometric_edges(pos, dom.values, dom.total, scale, p.alpha, target,
                                                edge_seed, workers, stats);
  return make_graph(w.size(), std::move(edges));
}

/// Skip sampler for the non-geometric kernels. With vertices in order of
/// decreasing weight, the kernel of a fixed u is non-increasing along the
/// order for every sigma >= 0, so geometric jumps at the current probability
/// followed by thinning give exact edge probabilities in O(n + m).
inline Graph sample_chung_lu_edges(const ModelParams& p, const WeightVector& w, double scale,
                                   std::uint64_t edge_seed, unsigned workers = 1) {
  p.validate();
  if (p.geometric()) throw ParameterError("chung-lu sampler requires a non-geometric model");
  const std::size_t n = w.size();
  const Kernel kernel = Kernel::from(p, scale, w.total);
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return w[a] > w[b]; });

  constexpr std::size_t block = 1024;
  const std::size_t blocks = (n + block - 1) / block;
  std::vector<std::vector<Edge>> parts(blocks);
  parallel_for(blocks, workers, [&](std::size_t b) {
    auto& out = parts[b];
    for (std::size_t i = b * block; i < std::min(n, (b + 1) * block); ++i) {
      const VertexId u = order[i];
      Rng rng(derive_seed(edge_seed, {u}));
      std::size_t j = i + 1;
      if (j >= n) break;
      double bound = kernel(w[u], w[order[j]], 0.0);
      while (j < n && bound > 0.0) {
        if (bound < 1.0) {
          const std::uint64_t skip = rng.geometric_skip(bound);
          if (skip >= n - j) break;
          j += skip;
        }
        const double q = kernel(w[u], w[order[j]], 0.0);
        if (q >= bound || rng.uniform() * bound < q) out.push_back({u, order[j]});
        bound = q;
        ++j;
      }
    }
  });
  std::vector<Edge> edges;
  std::size_t total = 0;
  for (auto& part : parts) total += part.size();
  edges.reserve(total);
  for (auto& part : parts) edges.insert(edges.end(), part.begin(), part.end());
  return make_graph(n, std::move(edges));
}

/// Samples a full instance of any model. `scale` is the global kernel
/// constant (see calibrate_avg_degree); it is ignored for rgg.
inline GeneratedGraph generate(const ModelParams& p, double scale, const GenerateOptions& opt = {}) {
  p.validate();
  if (!(scale > 0.0)) throw ParameterError("kernel scale must be positive");
  GeneratedGraph out;
  auto latents = sample_latents(p);
  out.weights = std::move(latents.weights);
  out.positions = std::move(latents.positions);
  out.scale = scale;
  const std::uint64_t edge_seed = derive_seed(p.seed, {stream::edges});
  if (opt.naive) {
    Rng rng(edge_seed);
    out.graph = generate_naive(p, out.weights, out.positions, scale, rng, opt.naive_cap);
    return out;
  }
  switch (p.model) {
    case Model::rgg:
      out.graph = rgg_from_positions(out.positions, p.rgg_radius);
      break;
    case Model::chung_lu:
    case Model::tunable_chung_lu:
      out.graph = sample_chung_lu_edges(p, out.weights, scale, edge_seed, opt.workers);
      break;
    case Model::girg:
    case Model::tgirg:
      out.graph = sample_geometric_edges(p, out.weights, out.positions, scale, edge_seed, opt.workers,
                                         &out.stats);
      break;
  }
  return out;
}

/// Fast TGIRG (or GIRG) instance for params.seed.
inline GeneratedGraph generate_tgirg_fast(const ModelParams& p, double scale, const GenerateOptions& opt = {}) {
  if (!(p.model == Model::girg || p.model == Model::tgirg))
    throw ParameterError("generate_tgirg_fast requires girg or tgirg");
  GenerateOptions fast = opt;
  fast.naive = false;
  return generate(p, scale, fast);
}

struct CalibrationOptions {
  int max_iters = 8;
  double tolerance = 0.05;
  double initial_scale = 1.0;
  GenerateOptions generate;
};

struct CalibrationResult {
  double scale = 1.0;
  int iterations = 0;
  double realized_avg_degree = 0.0;
  bool converged = false;
  std::vector<std::pair<double, double>> history;  // (scale, realized average degree)
  GeneratedGraph instance;                         // last generated instance
};

/// Searches the global kernel constant so that the realized average degree
/// of the instance for params.seed hits the target. Every iteration
/// regenerates the same latents, so the realized degree is a (nearly)
/// monotone function of the constant. The search keeps a bracket of
/// constants known to be too low / too high and steps proportionally to
/// target / realized inside it, falling back to log-bisection when the
/// proportional step leaves the bracket; unbounded sides grow by 4x.
inline CalibrationResult calibrate_avg_degree(const ModelParams& p, const CalibrationOptions& opt = {}) {
  p.validate();
  if (p.model == Model::rgg) throw ParameterError("rgg density is governed by the radius, not calibrated");
  const double target = p.target_avg_degree;
  if (p.n < 2 || target >= static_cast<double>(p.n) - 1.0)
    throw ParameterError("target average degree is unattainable for n = " + std::to_string(p.n));
  if (!(opt.initial_scale > 0.0) || opt.max_iters < 1) throw ParameterError("invalid calibration options");

  CalibrationResult res;
  double lo = 0.0, hi = kInfinity;
  double c = opt.initial_scale;
  for (int it = 1; it <= opt.max_iters; ++it) {
    res.instance = generate(p, c, opt.generate);
    const double avg = res.instance.graph.average_degree();
    res.scale = c;
    res.iterations = it;
    res.realized_avg_degree = avg;
    res.history.emplace_back(c, avg);
    if (std::abs(avg - target) <= opt.tolerance * target) {
      res.converged = true;
      break;
    }
    if (avg < target)
      lo = c;
    else
      hi = c;
    double next = avg > 0.0 ? c * target / avg : c * 4.0;
    if (std::isinf(hi))
      next = std::clamp(next, lo * 1.01, lo * 4.0);
    else if (lo == 0.0)
      next = std::clamp(next, hi / 4.0, hi * 0.99);
    else if (!(next > lo && next < hi))
      next = std::sqrt(lo * hi);
    c = next;
  }
  return res;
}

}  // namespace tunegraph
