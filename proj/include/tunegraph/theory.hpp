#pragma once

// Closed-form predictions for the tunable models and Monte Carlo oracles to
// check them against simulation. Densities are shapes: every regime carries
// an unknown constant factor, so callers compare exponents and boundaries.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "tunegraph/errors.hpp"
#include "tunegraph/generators.hpp"
#include "tunegraph/graph.hpp"
#include "tunegraph/model.hpp"
#include "tunegraph/parallel.hpp"
#include "tunegraph/rng.hpp"
#include "tunegraph/stats.hpp"

namespace tunegraph::theory {

struct PowerLawPiece {
  int regime = 0;
  double exponent = 0.0;  // local exponent of the density in its first argument
  double shape = 0.0;     // density value up to the regime constant
};

/// Density of the weight of a random edge endpoint: w^(1-tau) up to w = n,
/// n w^(-tau) beyond. Independent of sigma.
inline PowerLawPiece predicted_edge_endpoint_tail(double w, double tau, double n) {
  if (!(w >= 1.0) || !(tau > 2.0)) throw ParameterError("need w >= 1 and tau > 2");
  if (w <= n) return {0, 1.0 - tau, std::pow(w, 1.0 - tau)};
  return {1, -tau, n * std::pow(w, -tau)};
}

enum class ConditionalRegime { below_cutoff = 1, above_cutoff = 2, heavy_partner = 3 };

struct ConditionalPiece {
  ConditionalRegime regime = ConditionalRegime::below_cutoff;
  double exponent = 0.0;  // d log f / d log w at w
  double shape = 0.0;
};

/// Density of w_v given w_u and the edge uv:
///   (i)   (w ^ w_u)^sigma (w v w_u) <= n:  w^(1-tau) (w ^ w_u)^(sigma-1)
///   (ii)  w_u <= n < (w ^ w_u)^sigma (w v w_u):  w^(-tau) n / w_u
///   (iii) w_u > n:  w^(-tau)
inline ConditionalPiece predicted_conditional_weight_density(double w, double w_u, double tau, double sigma,
                                                             double n) {
  if (!(w >= 1.0 && w_u >= 1.0)) throw ParameterError("weights must be >= 1");
  if (!(tau > 2.0) || !(sigma >= 0.0)) throw ParameterError("need tau > 2 and sigma >= 0");
  const double lo = std::min(w, w_u), hi = std::max(w, w_u);
  if (w_u > n) return {ConditionalRegime::heavy_partner, -tau, std::pow(w, -tau)};
  if (std::pow(lo, sigma) * hi <= n) {
    const double exponent = (1.0 - tau) + (w <= w_u ? sigma - 1.0 : 0.0);
    return {ConditionalRegime::below_cutoff, exponent, std::pow(w, 1.0 - tau) * std::pow(lo, sigma - 1.0)};
  }
  return {ConditionalRegime::above_cutoff, -tau, std::pow(w, -tau) * n / w_u};
}

/// Joint density of the endpoint weights of a random edge:
/// (w_u ^ w_v)^(sigma-tau) (w_u v w_v)^(1-tau) below the cutoff, n (w_u w_v)^(-tau) above.
inline PowerLawPiece predicted_joint_weight_density(double w_u, double w_v, double tau, double sigma, double n) {
  if (!(w_u >= 1.0 && w_v >= 1.0)) throw ParameterError("weights must be >= 1");
  const double lo = std::min(w_u, w_v), hi = std::max(w_u, w_v);
  if (std::pow(lo, sigma) * hi <= n)
    return {0, sigma - tau, std::pow(lo, sigma - tau) * std::pow(hi, 1.0 - tau)};
  return {1, -tau, n * std::pow(w_u * w_v, -tau)};
}

struct PearsonScaling {
  bool in_hypothesis = false;  // 2 < tau < 7/3
  int sign = -1;
  double exponent = 0.0;  // r ~ -n^exponent
};

inline PearsonScaling predicted_pearson_scaling(double tau) {
  PearsonScaling s;
  s.in_hypothesis = tau > 2.0 && tau < 7.0 / 3.0;
  s.exponent = -(tau - 2.0) / (tau - 1.0);
  return s;
}

/// E[Vol(B(x_u) ∩ B(x_v)) / Vol(B(x_u))] for max-norm boxes with x_v uniform
/// in the box of x_u.
inline double rgg_expected_intersection_fraction(int d) {
  if (d < 1) throw ParameterError("dimension must be >= 1");
  return std::pow(0.75, d);
}

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Monte Carlo of the intersection fraction. The box of influence has side
/// `side` (an rgg with radius r has side 2r); x_v is uniform in the box of
/// x_u, and the overlap along each axis has length side - |offset|.
inline Estimate monte_carlo_intersection_fraction(int d, std::size_t samples, Rng& rng, double side = 0.1) {
  if (d < 1) throw ParameterError("dimension must be >= 1");
  if (samples < 1000) throw ParameterError("at least 1000 samples required");
  if (!(side > 0.0 && side <= 1.0)) throw ParameterError("box side must lie in (0, 1]");
  double sum = 0.0, sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    double frac = 1.0;
    for (int k = 0; k < d; ++k) {
      const double offset = (rng.uniform() - 0.5) * side;
      frac *= (side - std::abs(offset)) / side;
    }
    sum += frac;
    sq += frac * frac;
  }
  const double n = static_cast<double>(samples);
  const double m = sum / n;
  const double var = std::max(0.0, (sq - n * m * m) / (n - 1.0));
  return {m, std::sqrt(var / n), samples};
}

/// Predicted E[deg(v) | uv edge, deg(u) = k] in an rgg with radius r: the
/// k-1 other neighbors of u are uniform in u's box, the n-1-k non-neighbors
/// uniform outside it.
inline double rgg_predicted_neighbor_degree(std::size_t n, int d, double r, std::size_t k) {
  const double box = std::pow(2.0 * r, d);
  const double shared = rgg_expected_intersection_fraction(d);
  const double outside = static_cast<double>(n) - 1.0 - static_cast<double>(k);
  return 1.0 + (static_cast<double>(k) - 1.0) * shared + outside * box * (1.0 - shared) / (1.0 - box);
}

struct RggDegreePoint {
  std::size_t k = 0;
  std::size_t samples = 0;       // (u, v) pairs over all replicates
  std::size_t replicates = 0;    // replicates with at least one sample
  double mean = 0.0;             // mean over replicate means
  double std_error = 0.0;
  double predicted = 0.0;
  bool inconclusive = false;
  bool within_3se = false;
};

struct RggDegreeReport {
  std::vector<RggDegreePoint> points;
  double slope = 0.0;  // mean of per-replicate regression slopes
  double slope_stderr = 0.0;
  double slope_p_value = 1.0;  // one-sided, H1: slope > 0
  std::size_t replicates = 0;
};

struct RggCheckOptions {
  std::size_t k_min = 3;
  std::size_t k_max = 25;
  std::size_t replicates = 50;
  std::size_t min_samples = 30;  // per k and replicate count threshold for a conclusive point
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;
};

/// Simulates rggs and relates the degree of a neighbor v of u to deg(u) = k.
/// Every oriented edge (u, v) with deg(u) in [k_min, k_max] is a sample.
/// Standard errors and the slope test use replicate-level statistics, so
/// samples from one graph never count as independent.
inline RggDegreeReport rgg_conditional_degree_check(std::size_t n, int d, double r, const RggCheckOptions& opt = {}) {
  if (opt.k_max < opt.k_min || opt.replicates < 2) throw ParameterError("invalid rgg check options");
  const std::size_t width = opt.k_max - opt.k_min + 1;
  std::vector<std::vector<double>> sums(opt.replicates, std::vector<double>(width, 0.0));
  std::vector<std::vector<std::size_t>> counts(opt.replicates, std::vector<std::size_t>(width, 0));
  parallel_for(opt.replicates, opt.workers, [&](std::size_t rep) {
    Rng rng(derive_seed(opt.seed, {stream::positions, rep}));
    const Graph g = generate_rgg(n, d, r, rng);
    for (std::size_t u = 0; u < g.vertex_count(); ++u) {
      const std::size_t k = g.degree(static_cast<VertexId>(u));
      if (k < opt.k_min || k > opt.k_max) continue;
      for (VertexId v : g.neighbors(static_cast<VertexId>(u))) {
        sums[rep][k - opt.k_min] += static_cast<double>(g.degree(v));
        ++counts[rep][k - opt.k_min];
      }
    }
  });

  RggDegreeReport report;
  report.replicates = opt.replicates;
  for (std::size_t i = 0; i < width; ++i) {
    RggDegreePoint p;
    p.k = opt.k_min + i;
    p.predicted = rgg_predicted_neighbor_degree(n, d, r, p.k);
    std::vector<double> means;
    for (std::size_t rep = 0; rep < opt.replicates; ++rep) {
      p.samples += counts[rep][i];
      if (counts[rep][i] > 0) means.push_back(sums[rep][i] / static_cast<double>(counts[rep][i]));
    }
    p.replicates = means.size();
    p.inconclusive = means.size() < 2 || p.samples < opt.min_samples;
    if (!means.empty()) p.mean = stats::mean(means);
    if (means.size() >= 2) p.std_error = stats::standard_error(means);
    p.within_3se = !p.inconclusive && std::abs(p.mean - p.predicted) <= 3.0 * p.std_error;
    report.points.push_back(p);
  }

  std::vector<double> slopes;
  for (std::size_t rep = 0; rep < opt.replicates; ++rep) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < width; ++i)
      if (counts[rep][i] > 0) {
        xs.push_back(static_cast<double>(opt.k_min + i));
        ys.push_back(sums[rep][i] / static_cast<double>(counts[rep][i]));
      }
    if (xs.size() >= 3) slopes.push_back(stats::linear_fit(xs, ys).slope);
  }
  if (slopes.size() >= 2) {
    report.slope = stats::mean(slopes);
    report.slope_stderr = stats::standard_error(slopes);
    const double t = report.slope_stderr > 0.0 ? report.slope / report.slope_stderr
                                               : (report.slope > 0.0 ? INFINITY : 0.0);
    report.slope_p_value = stats::t_upper_p(t, static_cast<double>(slopes.size() - 1));
  }
  return report;
}

/// Estimate of the expected degree of a vertex with weight w: partners get
/// fresh weights and positions, and the connection probabilities (rather
/// than sampled indicators) are averaged and scaled by n - 1. total_weight
/// defaults to n times the mean weight.
inline Estimate monte_carlo_expected_degree(const ModelParams& p, double w, std::size_t samples, Rng& rng,
                                            double scale = 1.0, std::optional<double> total_weight = {}) {
  p.validate();
  if (!(w >= 1.0)) throw ParameterError("weight must be >= 1");
  if (samples < 2) throw ParameterError("at least two samples required");
  const double W = total_weight.value_or(static_cast<double>(p.n) * (p.weighted() ? (p.tau - 1.0) / (p.tau - 2.0) : 1.0));
  std::vector<double> xu(static_cast<std::size_t>(std::max(p.dim, 1))), xv(xu.size());
  double sum = 0.0, sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double wv = p.weighted() ? pareto_inverse_cdf(rng.uniform(), p.tau) : 1.0;
    double dist = 0.0;
    if (p.geometric()) {
      for (auto& x : xu) x = rng.uniform();
      for (auto& x : xv) x = rng.uniform();
      dist = torus_distance(xu, xv);
    }
    const double q = connection_probability(w, wv, dist, p, scale, W);
    sum += q;
    sq += q * q;
  }
  const double n = static_cast<double>(samples);
  const double m = sum / n;
  const double var = std::max(0.0, (sq - n * m * m) / (n - 1.0));
  const double factor = static_cast<double>(p.n) - 1.0;
  return {m * factor, std::sqrt(var / n) * factor, samples};
}

struct SamplerEquivalence {
  stats::TestResult edge_counts;  // Welch t test on per-replicate edge counts
  stats::TestResult degrees;      // chi-square homogeneity of pooled degree histograms
  double naive_mean_edges = 0.0;
  double fast_mean_edges = 0.0;
  double scale = 1.0;
  std::size_t replicates = 0;
};

/// For each replicate, draws one set of latents and samples edges on it
/// twice, once with the pairwise sampler and once with the fast sampler
/// (independent edge streams), all at one shared kernel scale. Edge counts
/// and pooled degree histograms are then compared. Sharing latents removes
/// the between-instance variability of the weights, so the pooled degree
/// counts are close to multinomial and the chi-square test stays calibrated.
inline SamplerEquivalence sampler_equivalence_check(const ModelParams& p, double scale, std::size_t replicates,
                                                    unsigned workers = 1) {
  p.validate();
  if (replicates < 2) throw ParameterError("at least two replicates required");
  if (p.model == Model::rgg) throw ParameterError("rgg has no randomness beyond its positions");
  std::vector<double> naive_edges(replicates), fast_edges(replicates);
  std::vector<std::vector<std::uint64_t>> naive_hist(replicates), fast_hist(replicates);
  auto histogram = [](const Graph& g) {
    std::vector<std::uint64_t> h(g.max_degree() + 1, 0);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) ++h[g.degree(static_cast<VertexId>(v))];
    return h;
  };
  parallel_for(replicates, workers, [&](std::size_t rep) {
    ModelParams q = p;
    q.seed = derive_seed(p.seed, {11, rep});
    const auto lat = sample_latents(q);
    Rng naive_rng(derive_seed(q.seed, {12}));
    const Graph naive = generate_naive(q, lat.weights, lat.positions, scale, naive_rng, std::max(p.n, kDefaultNaiveCap));
    const std::uint64_t fast_seed = derive_seed(q.seed, {13});
    const Graph fast = q.geometric() ? sample_geometric_edges(q, lat.weights, lat.positions, scale, fast_seed)
                                     : sample_chung_lu_edges(q, lat.weights, scale, fast_seed);
    naive_edges[rep] = static_cast<double>(naive.edge_count());
    fast_edges[rep] = static_cast<double>(fast.edge_count());
    naive_hist[rep] = histogram(naive);
    fast_hist[rep] = histogram(fast);
  });
  auto pool = [](const std::vector<std::vector<std::uint64_t>>& hs) {
    std::vector<std::uint64_t> out;
    for (const auto& h : hs) {
      if (h.size() > out.size()) out.resize(h.size(), 0);
      for (std::size_t k = 0; k < h.size(); ++k) out[k] += h[k];
    }
    return out;
  };
  SamplerEquivalence r;
  r.replicates = replicates;
  r.scale = scale;
  r.edge_counts = stats::welch_t_test(naive_edges, fast_edges);
  r.degrees = stats::chi_square_homogeneity(pool(naive_hist), pool(fast_hist));
  r.naive_mean_edges = stats::mean(naive_edges);
  r.fast_mean_edges = stats::mean(fast_edges);
  return r;
}

struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Least-squares slope of (ln x, ln y) over points with x in [lo, hi] and y > 0.
inline SlopeFit loglog_slope(std::span<const double> x, std::span<const double> y, double lo, double hi) {
  if (x.size() != y.size()) throw ParameterError("curve coordinates differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] >= lo && x[i] <= hi && x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  if (lx.size() < 5) throw ParameterError("log-log fit needs at least 5 points with y > 0 in range");
  const auto f = stats::linear_fit(lx, ly);
  return {f.slope, f.slope_stderr, f.intercept, f.points};
}

inline SlopeFit loglog_slope(const std::map<double, double>& curve, double lo, double hi) {
  std::vector<double> x, y;
  for (auto [a, b] : curve) {
    x.push_back(a);
    y.push_back(b);
  }
  return loglog_slope(x, y, lo, hi);
}

}  // namespace tunegraph::theory
