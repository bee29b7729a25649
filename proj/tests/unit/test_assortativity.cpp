#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "tunegraph/assortativity.hpp"
#include "tunegraph/generators.hpp"

using namespace tunegraph;

namespace {

// Pearson / Spearman straight from the definitions in floating point.
double pearson_reference(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> midranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && v[idx[j]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) r[idx[k]] = (static_cast<double>(i + j) + 1.0) / 2.0;
    i = j;
  }
  return r;
}

std::pair<std::vector<double>, std::vector<double>> coords(const Graph& g) {
  std::vector<double> x, y;
  for (auto [a, b] : remaining_degree_pairs(g).pairs) {
    x.push_back(static_cast<double>(a));
    y.push_back(static_cast<double>(b));
  }
  return {x, y};
}

}  // namespace

TEST(RemainingDegreePairs, Examples) {
  using P = std::pair<std::int64_t, std::int64_t>;
  EXPECT_EQ(remaining_degree_pairs(fixtures::path(2)).pairs, (std::vector<P>{{0, 0}, {0, 0}}));
  auto p3 = remaining_degree_pairs(fixtures::path(3)).pairs;
  std::sort(p3.begin(), p3.end());
  EXPECT_EQ(p3, (std::vector<P>{{0, 1}, {0, 1}, {1, 0}, {1, 0}}));
  auto s = remaining_degree_pairs(fixtures::star(3)).pairs;
  EXPECT_EQ(std::count(s.begin(), s.end(), P{2, 0}), 3);
  EXPECT_EQ(std::count(s.begin(), s.end(), P{0, 2}), 3);
  EXPECT_THROW(remaining_degree_pairs(fixtures::from_pairs(3, {})), GraphError);
}

TEST(Coefficients, HandFixtures) {
  const auto k = fixtures::k2_k3();
  EXPECT_EQ(pearson_assortativity(k), 1.0);
  EXPECT_EQ(spearman_assortativity(k), 1.0);
  EXPECT_EQ(kendall_assortativity(k), 1.0);
  const auto kc = kendall_counts(k);
  EXPECT_EQ(kc.concordant, 12u);
  EXPECT_EQ(kc.discordant, 0u);

  const auto p = fixtures::path(3);
  EXPECT_EQ(pearson_assortativity(p), -1.0);
  EXPECT_EQ(spearman_assortativity(p), -1.0);
  EXPECT_EQ(kendall_assortativity(p), -1.0);
  const auto pc = kendall_counts(p);
  EXPECT_EQ(pc.concordant, 0u);
  EXPECT_EQ(pc.discordant, 2u);
  EXPECT_EQ(pc.tied, 2u);

  EXPECT_EQ(pearson_assortativity(fixtures::star(3)), -1.0);

  const auto c = fixtures::cycle(5);
  EXPECT_FALSE(pearson_assortativity(c).has_value());
  EXPECT_FALSE(spearman_assortativity(c).has_value());
  EXPECT_FALSE(kendall_assortativity(c).has_value());
}

TEST(Coefficients, MatchFloatingPointDefinitions) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto g = fixtures::skewed_graph(120, seed);
    auto [x, y] = coords(g);
    EXPECT_NEAR(*pearson_assortativity(g), pearson_reference(x, y), 1e-12);
    auto rx = midranks(x), ry = midranks(y);
    EXPECT_NEAR(*spearman_assortativity(g), pearson_reference(rx, ry), 1e-12);
  }
}

TEST(Kendall, FastCountsEqualBruteForce) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed);
    const std::size_t n = 5 + rng.below(60);
    const std::size_t m = 2 + rng.below(199);
    const auto g = seed % 2 ? fixtures::random_graph(n, m, seed) : fixtures::skewed_graph(n, seed);
    if (g.edge_count() < 2 || g.edge_count() > 200) continue;
    const auto fast = kendall_counts(g), slow = kendall_counts_bruteforce(g);
    EXPECT_EQ(fast.concordant, slow.concordant) << seed;
    EXPECT_EQ(fast.discordant, slow.discordant) << seed;
    EXPECT_EQ(fast.tied, slow.tied) << seed;
    EXPECT_EQ(fast.total_pairs, slow.total_pairs) << seed;
  }
}

TEST(Kendall, NeedsTwoEdges) { EXPECT_THROW(kendall_assortativity(fixtures::path(2)), GraphError); }

TEST(Coefficients, InvariantUnderRelabeling) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = fixtures::skewed_graph(200, seed);
    const auto h = fixtures::relabel(g, fixtures::random_permutation(200, seed * 7));
    const auto a = assortativity_report(g), b = assortativity_report(h);
    EXPECT_NEAR(*a.pearson, *b.pearson, 1e-12);
    EXPECT_EQ(a.spearman, b.spearman);
    EXPECT_EQ(a.kendall, b.kendall);
    EXPECT_EQ(a.concordant, b.concordant);
  }
}

// Ranks of deg and deg^2 coincide, so rank statistics must not move.
TEST(Coefficients, RankStatisticsIgnoreMonotoneTransforms) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = fixtures::skewed_graph(150, seed);
    auto [x, y] = coords(g);
    auto sq = [](std::vector<double> v) {
      for (auto& a : v) a = (a + 1) * (a + 1);
      return v;
    };
    const double squared = pearson_reference(midranks(sq(x)), midranks(sq(y)));
    EXPECT_NEAR(*spearman_assortativity(g), squared, 1e-12);
    // kendall on squared coordinates by direct pair count
    const auto X = sq(x), Y = sq(y);
    long long c = 0, d = 0;
    for (std::size_t i = 0; i < X.size(); ++i)
      for (std::size_t j = i + 1; j < X.size(); ++j) {
        if (i / 2 == j / 2) continue;
        const double s = (X[i] - X[j]) * (Y[i] - Y[j]);
        c += s > 0;
        d += s < 0;
      }
    EXPECT_NEAR(*kendall_assortativity(g), static_cast<double>(c - d) / static_cast<double>(c + d), 1e-12);
  }
}

TEST(Report, CoefficientsWithinUnitInterval) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = assortativity_report(fixtures::random_graph(100, 300, seed));
    for (const auto& v : {r.pearson, r.spearman, r.kendall}) {
      ASSERT_TRUE(v.has_value());
      EXPECT_GE(*v, -1.0);
      EXPECT_LE(*v, 1.0);
    }
    EXPECT_GE(r.tie_fraction, 0.0);
    EXPECT_LE(r.tie_fraction, 1.0);
  }
}

TEST(Hill, ContinuousParetoSample) {
  std::vector<double> estimates;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto w = sample_weights(100000, 2.5, rng);
    estimates.push_back(*hill_estimator(std::span<const double>(w.values), 1000).tau);
  }
  for (double t : estimates) EXPECT_NEAR(t, 2.5, 0.15);
}

TEST(Hill, DegenerateTail) {
  const DegreeSequence d(fixtures::cycle(50));
  EXPECT_FALSE(hill_estimator(d, 20).tau.has_value());
}

TEST(Hill, PreconditionsOnTailSize) {
  const DegreeSequence d(fixtures::cycle(50));
  EXPECT_THROW(hill_estimator(d, 5), ParameterError);
  EXPECT_THROW(hill_estimator(d, 50), ParameterError);
}

TEST(Hill, GeneratedChungLu) {
  ModelParams p;
  p.model = Model::chung_lu;
  p.n = 100000;
  p.tau = 2.8;
  const auto g = calibrate_avg_degree(p).instance.graph;
  const DegreeSequence d(g);
  const auto h = hill_estimator(d, default_hill_k(d));
  ASSERT_TRUE(h.tau.has_value());
  EXPECT_GE(*h.tau, 2.55);
  EXPECT_LE(*h.tau, 3.05);
}

TEST(Pearson, NegativeForHeavyTailsBelowSevenThirds) {
  for (double sigma : {0.2, 1.0, 1.6}) {
    ModelParams p;
    p.model = Model::tunable_chung_lu;
    p.n = 20000;
    p.tau = 2.2;
    p.sigma = sigma;
    p.allow_any_sigma = true;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      p.seed = seed;
      const auto g = calibrate_avg_degree(p).instance.graph;
      EXPECT_LT(*pearson_assortativity(g), 0.0) << "sigma=" << sigma << " seed=" << seed;
    }
  }
}
