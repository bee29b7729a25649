#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tunegraph/errors.hpp"
#include "tunegraph/graph.hpp"
#include "tunegraph/rng.hpp"

namespace tunegraph {

/// Both orientations (deg(u)-1, deg(v)-1), (deg(v)-1, deg(u)-1) of every
/// edge, in edge order.
struct RemainingDegreePairs {
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;

  std::size_t size() const noexcept { return pairs.size(); }
};

inline RemainingDegreePairs remaining_degree_pairs(const Graph& g) {
  if (g.edge_count() == 0) throw GraphError("graph has no edges");
  RemainingDegreePairs out;
  out.pairs.reserve(2 * g.edge_count());
  for (const auto& e : g.edges()) {
    const auto a = static_cast<std::int64_t>(g.degree(e.u)) - 1;
    const auto b = static_cast<std::int64_t>(g.degree(e.v)) - 1;
    out.pairs.emplace_back(a, b);
    out.pairs.emplace_back(b, a);
  }
  return out;
}

namespace detail {

__extension__ typedef __int128 i128;

inline double to_double(i128 x) noexcept { return static_cast<double>(x); }

// Correlation of the symmetric sample {(x_e, y_e), (y_e, x_e)} from integer
// sums. Both coordinates share one marginal, so the denominator is Var(X).
inline std::optional<double> symmetric_correlation(std::span<const std::int64_t> x,
                                                   std::span<const std::int64_t> y) {
  i128 s = 0, sq = 0, cross = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i] + y[i];
    sq += static_cast<i128>(x[i]) * x[i] + static_cast<i128>(y[i]) * y[i];
    cross += static_cast<i128>(2) * x[i] * y[i];
  }
  const i128 m = static_cast<i128>(2 * x.size());
  // m^2 Cov = m * sum(xy) - s^2 ; m^2 Var = m * sum(x^2) - s^2
  const i128 var = m * sq - s * s;
  if (var == 0) return std::nullopt;
  const i128 cov = m * cross - s * s;
  return std::clamp(to_double(cov) / to_double(var), -1.0, 1.0);
}

}  // namespace detail

/// Pearson correlation of remaining degrees over both edge orientations.
/// Computed from exact integer moments. nullopt when every edge endpoint has
/// the same degree.
inline std::optional<double> pearson_assortativity(const Graph& g) {
  if (g.edge_count() == 0) throw GraphError("graph has no edges");
  std::vector<std::int64_t> x, y;
  x.reserve(g.edge_count());
  y.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    x.push_back(static_cast<std::int64_t>(g.degree(e.u)) - 1);
    y.push_back(static_cast<std::int64_t>(g.degree(e.v)) - 1);
  }
  return detail::symmetric_correlation(x, y);
}

/// Twice the mid-rank of each value among the 2|E| oriented endpoints.
/// Integer valued, so the Spearman sums stay exact.
inline std::vector<std::int64_t> doubled_midranks(const Graph& g) {
  // endpoint multiset: vertex v of degree k appears k times, so the value k
  // has multiplicity k * count(k)
  const std::size_t top = g.max_degree();
  std::vector<std::int64_t> mult(top + 1, 0);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const auto k = g.degree(static_cast<VertexId>(v));
    mult[k] += static_cast<std::int64_t>(k);
  }
  std::vector<std::int64_t> rank2(top + 1, 0);
  std::int64_t less = 0;
  for (std::size_t k = 0; k <= top; ++k) {
    rank2[k] = 2 * less + mult[k] + 1;  // 2 * (less + (mult + 1) / 2)
    less += mult[k];
  }
  return rank2;
}

/// Pearson correlation of mid-ranks of remaining degrees (ties share the
/// average of their ranks).
inline std::optional<double> spearman_assortativity(const Graph& g) {
  if (g.edge_count() == 0) throw GraphError("graph has no edges");
  const auto rank2 = doubled_midranks(g);
  std::vector<std::int64_t> x, y;
  x.reserve(g.edge_count());
  y.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    x.push_back(rank2[g.degree(e.u)]);
    y.push_back(rank2[g.degree(e.v)]);
  }
  return detail::symmetric_correlation(x, y);
}

struct KendallCounts {
  std::uint64_t concordant = 0;
  std::uint64_t discordant = 0;
  std::uint64_t tied = 0;  // pairs tied in x or y, same-edge pairs excluded
  std::uint64_t excluded_same_edge_pairs = 0;
  std::uint64_t total_pairs = 0;  // cross-edge pairs considered
};

namespace detail {

// Sorts v and returns the number of inversions (pairs i < j with v[i] > v[j]).
inline std::uint64_t count_inversions(std::vector<std::int64_t>& v) {
  std::vector<std::int64_t> buf(v.size());
  std::uint64_t inv = 0;
  for (std::size_t width = 1; width < v.size(); width *= 2) {
    for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, v.size());
      const std::size_t hi = std::min(lo + 2 * width, v.size());
      std::size_t a = lo, b = mid, out = lo;
      while (a < mid && b < hi) {
        if (v[b] < v[a]) {
          inv += mid - a;
          buf[out++] = v[b++];
        } else {
          buf[out++] = v[a++];
        }
      }
      while (a < mid) buf[out++] = v[a++];
      while (b < hi) buf[out++] = v[b++];
    }
    std::swap(v, buf);
  }
  return inv;
}

// Sum over runs of equal values of C(run, 2). Input sorted.
template <class It, class Eq>
std::uint64_t tied_pairs(It first, It last, Eq eq) {
  std::uint64_t total = 0;
  while (first != last) {
    It run = first;
    std::uint64_t len = 0;
    while (run != last && eq(*run, *first)) {
      ++run;
      ++len;
    }
    total += len * (len - 1) / 2;
    first = run;
  }
  return total;
}

}  // namespace detail

/// Concordance counts over unordered pairs of oriented remaining-degree
/// points coming from distinct edges. All pairs are counted by Knight's
/// merge-sort method; the |E| same-edge pairs (x, y), (y, x) are then
/// removed analytically: discordant when x != y, tied otherwise.
inline KendallCounts kendall_counts(const Graph& g) {
  if (g.edge_count() == 0) throw GraphError("graph has no edges");
  auto pts = remaining_degree_pairs(g).pairs;
  const auto m = static_cast<std::uint64_t>(pts.size());
  std::sort(pts.begin(), pts.end());
  const std::uint64_t n0 = m * (m - 1) / 2;
  const std::uint64_t tie_x =
      detail::tied_pairs(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first == b.first; });
  const std::uint64_t tie_xy = detail::tied_pairs(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a == b; });
  std::vector<std::int64_t> ys(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) ys[i] = pts[i].second;
  // sorted by (x, y): inversions in y are exactly the discordant pairs
  std::uint64_t discordant = detail::count_inversions(ys);
  const std::uint64_t tie_y = detail::tied_pairs(ys.begin(), ys.end(), std::equal_to<>{});
  std::uint64_t concordant = n0 - tie_x - tie_y + tie_xy - discordant;
  std::uint64_t tied = tie_x + tie_y - tie_xy;

  std::uint64_t unequal = 0;
  for (const auto& e : g.edges())
    if (g.degree(e.u) != g.degree(e.v)) ++unequal;
  KendallCounts out;
  out.excluded_same_edge_pairs = g.edge_count();
  discordant -= unequal;
  tied -= g.edge_count() - unequal;
  out.concordant = concordant;
  out.discordant = discordant;
  out.tied = tied;
  out.total_pairs = n0 - g.edge_count();
  return out;
}

/// (C - D) / (C + D) over cross-edge pairs; nullopt when C + D = 0.
inline std::optional<double> kendall_assortativity(const Graph& g) {
  if (g.edge_count() < 2) throw GraphError("kendall assortativity needs at least two edges");
  const auto k = kendall_counts(g);
  const std::uint64_t cd = k.concordant + k.discordant;
  if (cd == 0) return std::nullopt;
  return (static_cast<double>(k.concordant) - static_cast<double>(k.discordant)) / static_cast<double>(cd);
}

/// Quadratic reference count, for testing.
inline KendallCounts kendall_counts_bruteforce(const Graph& g) {
  const auto pts = remaining_degree_pairs(g).pairs;
  KendallCounts out;
  out.excluded_same_edge_pairs = g.edge_count();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (i / 2 == j / 2) continue;  // orientations of one edge are adjacent
      ++out.total_pairs;
      const auto dx = pts[i].first - pts[j].first;
      const auto dy = pts[i].second - pts[j].second;
      if (dx == 0 || dy == 0)
        ++out.tied;
      else if ((dx > 0) == (dy > 0))
        ++out.concordant;
      else
        ++out.discordant;
    }
  return out;
}

struct CoefficientReport {
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::optional<double> kendall;
  std::uint64_t concordant = 0;
  std::uint64_t discordant = 0;
  std::uint64_t excluded_same_edge_pairs = 0;
  // Share of cross-edge pairs tied in at least one coordinate.
  double tie_fraction = 0.0;
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
};

inline CoefficientReport assortativity_report(const Graph& g) {
  if (g.edge_count() == 0) throw GraphError("graph has no edges");
  CoefficientReport r;
  r.vertex_count = g.vertex_count();
  r.edge_count = g.edge_count();
  r.pearson = pearson_assortativity(g);
  r.spearman = spearman_assortativity(g);
  const auto k = kendall_counts(g);
  r.concordant = k.concordant;
  r.discordant = k.discordant;
  r.excluded_same_edge_pairs = k.excluded_same_edge_pairs;
  r.tie_fraction = k.total_pairs == 0 ? 0.0 : static_cast<double>(k.tied) / static_cast<double>(k.total_pairs);
  if (g.edge_count() >= 2 && k.concordant + k.discordant > 0)
    r.kendall = (static_cast<double>(k.concordant) - static_cast<double>(k.discordant)) /
                static_cast<double>(k.concordant + k.discordant);
  return r;
}

struct HillEstimate {
  std::optional<double> tau;
  std::size_t k_tail = 0;
};

inline constexpr std::uint64_t kHillJitterSeed = 0x4b11;

/// Hill estimate of the density exponent from continuous samples:
/// 1 + k / sum_{i<=k} ln(x_(i) / x_(k+1)).
inline HillEstimate hill_estimator(std::span<const double> samples, std::size_t k_tail) {
  if (k_tail < 1 || k_tail >= samples.size())
    throw ParameterError("k_tail must lie in [1, sample count)");
  std::vector<double> x(samples.begin(), samples.end());
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k_tail), x.end(), std::greater<>{});
  const double ref = x[k_tail];
  if (!(ref > 0.0)) throw ParameterError("hill estimator needs positive samples");
  double sum = 0.0;
  for (std::size_t i = 0; i < k_tail; ++i) sum += std::log(x[i] / ref);
  HillEstimate h;
  h.k_tail = k_tail;
  if (sum > 0.0) h.tau = 1.0 + static_cast<double>(k_tail) / sum;
  return h;
}

/// Hill estimate on integer degrees. Nonzero degrees are jittered by
/// +U[0,1) from a fixed seed; the tail is declared degenerate (nullopt)
/// when the k_tail+1 largest degrees are all equal.
inline HillEstimate hill_estimator(const DegreeSequence& degrees, std::size_t k_tail,
                                   std::uint64_t seed = kHillJitterSeed) {
  if (k_tail < 10) throw ParameterError("k_tail must be at least 10");
  const std::size_t nonzero = degrees.vertex_count() - degrees.count(0);
  if (k_tail >= nonzero) throw ParameterError("k_tail must be smaller than the number of nonzero degrees");
  // the (k_tail+1)-th largest degree
  std::size_t seen = 0, kth = 0;
  for (std::size_t k = degrees.max_degree(); k >= 1; --k) {
    seen += degrees.count(k);
    if (seen >= k_tail + 1) {
      kth = k;
      break;
    }
  }
  if (kth == degrees.max_degree()) return HillEstimate{std::nullopt, k_tail};
  Rng rng(seed);
  std::vector<double> x;
  x.reserve(nonzero);
  for (std::size_t k = 1; k <= degrees.max_degree(); ++k)
    for (std::size_t c = 0; c < degrees.count(k); ++c) x.push_back(static_cast<double>(k) + rng.uniform());
  return hill_estimator(std::span<const double>(x), k_tail);
}

/// Default tail size: 1% of the nonzero degrees, at least 10.
inline std::size_t default_hill_k(const DegreeSequence& degrees) {
  const std::size_t nonzero = degrees.vertex_count() - degrees.count(0);
  return std::max<std::size_t>(10, nonzero / 100);
}

}  // namespace tunegraph
