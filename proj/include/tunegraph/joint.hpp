#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tunegraph/errors.hpp"
#include "tunegraph/graph.hpp"

namespace tunegraph {

inline constexpr int kDefaultBuckets = 21;

/// Logarithmic degree buckets B_i = [b^i, b^(i+1)) with b = (d_max+1)^(1/N),
/// so d_max lands in the last bucket once ln d_max / ln(d_max + 1) >= (N-1)/N
/// (d_max >= 9 for 21 buckets).
class BucketScheme {
 public:
  BucketScheme() = default;

  BucketScheme(std::size_t d_max, int num_buckets = kDefaultBuckets) : d_max_(d_max), count_(num_buckets) {
    if (d_max < 1) throw ParameterError("bucket scheme needs d_max >= 1");
    if (num_buckets < 1) throw ParameterError("bucket count must be >= 1");
    base_ = std::pow(static_cast<double>(d_max) + 1.0, 1.0 / num_buckets);
    log_base_ = std::log(static_cast<double>(d_max) + 1.0) / num_buckets;
  }

  int size() const noexcept { return count_; }
  double base() const noexcept { return base_; }
  std::size_t d_max() const noexcept { return d_max_; }

  /// b^i; lower(size()) = d_max + 1.
  double lower(int i) const noexcept { return std::exp(log_base_ * i); }

  std::vector<double> boundaries() const {
    std::vector<double> out;
    for (int i = 0; i <= count_; ++i) out.push_back(lower(i));
    return out;
  }

  /// floor(ln k / ln b), clamped to [0, size()-1]. The small guard keeps
  /// degrees sitting exactly on b^i in bucket i despite rounding.
  int bucket(std::size_t k) const noexcept {
    if (k <= 1) return 0;
    const double x = std::log(static_cast<double>(k)) / log_base_;
    const int i = static_cast<int>(std::floor(x + 1e-9));
    return std::clamp(i, 0, count_ - 1);
  }

 private:
  std::size_t d_max_ = 1;
  int count_ = kDefaultBuckets;
  double base_ = 2.0;
  double log_base_ = std::log(2.0);
};

inline BucketScheme bucket_scheme(std::size_t d_max, int num_buckets = kDefaultBuckets) {
  return BucketScheme(d_max, num_buckets);
}

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int n, T fill) : n_(n), data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill) {}

  int size() const noexcept { return n_; }
  T& operator()(int i, int j) noexcept { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const noexcept { return data_[index(i, j)]; }

 private:
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  int n_ = 0;
  std::vector<T> data_;
};

/// P[X in B_i, Y in B_j] for X, Y the degrees at the two ends of a
/// uniformly drawn, uniformly oriented edge.
struct JointHistogram {
  BucketScheme scheme;
  Matrix<std::uint64_t> counts;  // oriented endpoint pairs per cell
  Matrix<double> probs;
  std::vector<double> marginals;
  std::uint64_t total = 0;  // 2|E|
};

inline JointHistogram joint_degree_histogram(const Graph& g, const BucketScheme& scheme) {
  if (g.edge_count() == 0) throw GraphError("graph has no edges");
  const int nb = scheme.size();
  JointHistogram h{scheme, Matrix<std::uint64_t>(nb, 0), Matrix<double>(nb, 0.0), std::vector<double>(static_cast<std::size_t>(nb), 0.0), 0};
  for (const auto& e : g.edges()) {
    const int a = scheme.bucket(g.degree(e.u));
    const int b = scheme.bucket(g.degree(e.v));
    ++h.counts(a, b);
    ++h.counts(b, a);
  }
  h.total = 2 * static_cast<std::uint64_t>(g.edge_count());
  const double total = static_cast<double>(h.total);
  for (int i = 0; i < nb; ++i) {
    std::uint64_t row = 0;
    for (int j = 0; j < nb; ++j) {
      h.probs(i, j) = static_cast<double>(h.counts(i, j)) / total;
      row += h.counts(i, j);
    }
    h.marginals[static_cast<std::size_t>(i)] = static_cast<double>(row) / total;
  }
  return h;
}

inline JointHistogram joint_degree_histogram(const Graph& g, int num_buckets = kDefaultBuckets) {
  return joint_degree_histogram(g, BucketScheme(std::max<std::size_t>(1, g.max_degree()), num_buckets));
}

/// Signed relative change of P[X in B_i] when conditioning on Y in B_j.
/// Positive: 1 - P[X]/P[X|Y]; negative: -(1 - P[X|Y]/P[X]). nullopt where a
/// marginal is zero.
struct ConditionalHeatmap {
  BucketScheme scheme;
  Matrix<std::optional<double>> change;
  Matrix<std::uint64_t> samples;  // oriented endpoint pairs behind each cell
};

/// The signed change for a marginal p and a conditional probability q.
inline double conditional_change(double marginal, double conditional) noexcept {
  if (conditional >= marginal) return conditional == 0.0 ? 0.0 : 1.0 - marginal / conditional;
  return -(1.0 - conditional / marginal);
}

inline ConditionalHeatmap conditional_change_heatmap(const JointHistogram& joint) {
  const int nb = joint.scheme.size();
  ConditionalHeatmap out{joint.scheme, Matrix<std::optional<double>>(nb, std::nullopt), joint.counts};
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) {
      const double mi = joint.marginals[static_cast<std::size_t>(i)];
      const double mj = joint.marginals[static_cast<std::size_t>(j)];
      if (mi == 0.0 || mj == 0.0) continue;
      // P[X|Y]/P[X] = p_ij / (m_i m_j) is symmetric in (i, j); comparing
      // the ratio with 1 keeps M[i][j] == M[j][i] bit for bit.
      const double lo = std::min(mi, mj), hi = std::max(mi, mj);
      const double q = joint.probs(i, j) / lo / hi;
      out.change(i, j) = q >= 1.0 ? 1.0 - 1.0 / q : -(1.0 - q);
    }
  return out;
}

/// Complementary CDF curves evaluated at every realized degree, ascending.
struct CCDFCurve {
  std::vector<std::size_t> x;
  std::vector<double> y;
  bool empty = false;  // conditioning event had no samples
};

struct CCDFCurves {
  BucketScheme scheme;
  CCDFCurve node;
  CCDFCurve edge;
  std::vector<double> levels;          // c values
  std::vector<int> conditional_buckets;  // bucket behind each level
  std::vector<CCDFCurve> conditional;
};

/// Bucket used for conditioning level c in [0, 1].
inline int conditioning_bucket(const BucketScheme& s, double c) {
  return static_cast<int>(std::lround(c * (s.size() - 1)));
}

namespace detail {

inline CCDFCurve ccdf_from_counts(const std::vector<std::uint64_t>& counts) {
  CCDFCurve c;
  std::uint64_t total = 0;
  for (auto x : counts) total += x;
  if (total == 0) {
    c.empty = true;
    return c;
  }
  std::uint64_t at_least = total;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    c.x.push_back(k);
    c.y.push_back(static_cast<double>(at_least) / static_cast<double>(total));
    at_least -= counts[k];
  }
  return c;
}

}  // namespace detail

inline CCDFCurves degree_ccdf_curves(const Graph& g, const BucketScheme& scheme,
                                     std::vector<double> levels = {0.0, 0.25, 0.5, 0.75, 1.0}) {
  if (g.edge_count() == 0) throw GraphError("graph has no edges");
  const std::size_t top = g.max_degree();
  CCDFCurves out;
  out.scheme = scheme;
  out.levels = levels;

  std::vector<std::uint64_t> node(top + 1, 0), edge(top + 1, 0);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const auto k = g.degree(static_cast<VertexId>(v));
    ++node[k];
    edge[k] += k;
  }
  out.node = detail::ccdf_from_counts(node);
  out.edge = detail::ccdf_from_counts(edge);

  std::vector<std::vector<std::uint64_t>> cond(levels.size(), std::vector<std::uint64_t>(top + 1, 0));
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (!(levels[l] >= 0.0 && levels[l] <= 1.0)) throw ParameterError("conditioning level must lie in [0, 1]");
    out.conditional_buckets.push_back(conditioning_bucket(scheme, levels[l]));
  }
  for (const auto& e : g.edges()) {
    const auto du = g.degree(e.u), dv = g.degree(e.v);
    const int bu = scheme.bucket(du), bv = scheme.bucket(dv);
    for (std::size_t l = 0; l < levels.size(); ++l) {
      // X is the near end, Y the partner
      if (bv == out.conditional_buckets[l]) ++cond[l][du];
      if (bu == out.conditional_buckets[l]) ++cond[l][dv];
    }
  }
  for (auto& c : cond) out.conditional.push_back(detail::ccdf_from_counts(c));
  return out;
}

inline CCDFCurves degree_ccdf_curves(const Graph& g, int num_buckets = kDefaultBuckets) {
  return degree_ccdf_curves(g, BucketScheme(std::max<std::size_t>(1, g.max_degree()), num_buckets));
}

/// Value of a CCDF curve at x (step function; 0 beyond the last point).
inline double evaluate_ccdf(const CCDFCurve& c, std::size_t x) {
  auto it = std::lower_bound(c.x.begin(), c.x.end(), x);
  if (it == c.x.end()) return 0.0;
  return c.y[static_cast<std::size_t>(it - c.x.begin())];
}

}  // namespace tunegraph
