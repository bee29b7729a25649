#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tunegraph/errors.hpp"
#include "tunegraph/rng.hpp"

namespace tunegraph {

enum class Model { chung_lu, tunable_chung_lu, rgg, girg, tgirg };

inline std::string_view to_string(Model m) {
  switch (m) {
    case Model::chung_lu: return "chung_lu";
    case Model::tunable_chung_lu: return "tunable_chung_lu";
    case Model::rgg: return "rgg";
    case Model::girg: return "girg";
    case Model::tgirg: return "tgirg";
  }
  return "unknown";
}

inline std::optional<Model> parse_model(std::string_view s) {
  for (Model m : {Model::chung_lu, Model::tunable_chung_lu, Model::rgg, Model::girg, Model::tgirg})
    if (to_string(m) == s) return m;
  if (s == "tcl" || s == "tunable-chung-lu") return Model::tunable_chung_lu;
  if (s == "chung-lu" || s == "cl") return Model::chung_lu;
  return std::nullopt;
}

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr std::uint64_t kDefaultSeed = 20240607;

/// alpha = 1/T; temperature 0 is the threshold (alpha = infinity) regime.
inline double alpha_from_temperature(double temperature) {
  if (!(temperature >= 0.0 && temperature < 1.0))
    throw ParameterError("temperature must lie in [0, 1)");
  return temperature == 0.0 ? kInfinity : 1.0 / temperature;
}

struct ModelParams {
  Model model = Model::tgirg;
  std::size_t n = 1000;
  double tau = 2.8;
  // Exponent on the smaller weight. Ignored (treated as 1) for chung_lu and girg.
  double sigma = 1.0;
  double alpha = kInfinity;
  int dim = 2;
  double target_avg_degree = 15.0;
  // Only used by rgg.
  double rgg_radius = 0.0;
  std::uint64_t seed = kDefaultSeed;
  // Lifts the sigma < tau - 1 restriction. The degree law stops being a
  // power law with exponent tau beyond it; sweeps that cross the boundary
  // opt in explicitly.
  bool allow_any_sigma = false;

  bool geometric() const noexcept {
    return model == Model::rgg || model == Model::girg || model == Model::tgirg;
  }

  bool weighted() const noexcept { return model != Model::rgg; }

  double effective_sigma() const noexcept {
    return (model == Model::chung_lu || model == Model::girg) ? 1.0 : sigma;
  }

  double temperature() const noexcept { return std::isinf(alpha) ? 0.0 : 1.0 / alpha; }

  void validate() const {
    if (model == Model::rgg) {
      if (dim < 1) throw ParameterError("dimension must be >= 1");
      if (!(rgg_radius > 0.0 && rgg_radius <= 0.5))
        throw ParameterError("rgg radius must lie in (0, 1/2]");
      return;
    }
    if (!(tau > 2.0)) throw ParameterError("power-law exponent tau must exceed 2");
    const double s = effective_sigma();
    if (!(s >= 0.0)) throw ParameterError("sigma must be >= 0");
    if (!allow_any_sigma && !(s < tau - 1.0))
      throw ParameterError("sigma must be smaller than tau - 1 (got sigma=" + std::to_string(s) +
                           ", tau=" + std::to_string(tau) + ")");
    if (geometric()) {
      if (dim < 1) throw ParameterError("dimension must be >= 1");
      if (!(alpha > 1.0)) throw ParameterError("alpha must exceed 1 (temperature below 1)");
    }
    if (!(target_avg_degree > 0.0)) throw ParameterError("target average degree must be positive");
  }
};

struct WeightVector {
  std::vector<double> values;
  double total = 0.0;

  WeightVector() = default;
  explicit WeightVector(std::vector<double> w) : values(std::move(w)) { recompute_total(); }

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t v) const noexcept { return values[v]; }

  void recompute_total() {
    total = 0.0;
    for (double w : values) total += w;
  }
};

/// Points of the torus [0,1)^dim, stored row-major.
struct PositionMatrix {
  int dim = 0;
  std::vector<double> coords;

  PositionMatrix() = default;
  PositionMatrix(int d, std::vector<double> c) : dim(d), coords(std::move(c)) {
    if (d < 1 || coords.size() % static_cast<std::size_t>(d) != 0)
      throw ParameterError("coordinate count is not a multiple of the dimension");
  }

  std::size_t size() const noexcept { return dim == 0 ? 0 : coords.size() / static_cast<std::size_t>(dim); }
  bool empty() const noexcept { return coords.empty(); }

  std::span<const double> point(std::size_t v) const noexcept {
    return {coords.data() + v * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

/// Inverse CDF of the Pareto law with density (tau-1) w^-tau on [1, inf).
inline double pareto_inverse_cdf(double u, double tau) {
  return std::pow(1.0 - u, -1.0 / (tau - 1.0));
}

inline WeightVector sample_weights(std::size_t n, double tau, Rng& rng) {
  if (!(tau > 2.0)) throw ParameterError("power-law exponent tau must exceed 2");
  std::vector<double> w(n);
  for (auto& x : w) x = pareto_inverse_cdf(rng.uniform(), tau);
  return WeightVector(std::move(w));
}

inline PositionMatrix sample_positions(std::size_t n, int dim, Rng& rng) {
  if (dim < 1) throw ParameterError("dimension must be >= 1");
  std::vector<double> c(n * static_cast<std::size_t>(dim));
  for (auto& x : c) x = rng.uniform();
  return PositionMatrix(dim, std::move(c));
}

inline double torus_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ParameterError("points differ in dimension");
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = std::abs(a[i] - b[i]);
    best = std::max(best, std::min(diff, 1.0 - diff));
  }
  return best;
}

inline double int_pow(double x, int k) noexcept {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

/// Connection kernel shared by all weighted models. `scale` is the single
/// global constant standing in for the unspecified Theta-constants; it is
/// applied inside the cap and before the exponent alpha.
struct Kernel {
  double sigma = 1.0;
  double alpha = kInfinity;
  double scale = 1.0;
  double total_weight = 1.0;
  int dim = 0;  // 0 = non-geometric

  static Kernel from(const ModelParams& p, double scale, double total_weight) {
    return Kernel{p.effective_sigma(), p.alpha, scale, total_weight, p.geometric() ? p.dim : 0};
  }

  /// c * (wu ^ wv)^sigma (wu v wv) / W
  double strength(double wu, double wv) const noexcept {
    const double lo = std::min(wu, wv), hi = std::max(wu, wv);
    const double lo_term = sigma == 1.0 ? lo : std::pow(lo, sigma);
    return scale * lo_term * hi / total_weight;
  }

  double operator()(double wu, double wv, double dist) const noexcept {
    const double s = strength(wu, wv);
    if (dim == 0) return std::min(s, 1.0);
    if (dist <= 0.0) return 1.0;
    const double volume = int_pow(dist, dim);
    if (std::isinf(alpha)) return volume <= s ? 1.0 : 0.0;
    const double x = s / volume;
    if (x >= 1.0) return 1.0;
    return std::pow(x, alpha);
  }
};

/// Edge probability for a pair with weights (w_u, w_v) at torus distance
/// `dist`. For rgg the radius threshold applies and the weights are ignored.
inline double connection_probability(double w_u, double w_v, double dist, const ModelParams& params,
                                     double scale, double total_weight) {
  if (params.model == Model::rgg) return dist <= params.rgg_radius ? 1.0 : 0.0;
  return Kernel::from(params, scale, total_weight)(w_u, w_v, dist);
}

}  // namespace tunegraph
