#pragma once

// Small statistics toolbox for the validation code. Distribution functions
// come from Boost.Math.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "tunegraph/errors.hpp"

namespace tunegraph::stats {

inline double mean(std::span<const double> x) {
  if (x.empty()) throw ParameterError("mean of empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Unbiased sample variance.
inline double variance(std::span<const double> x) {
  if (x.size() < 2) throw ParameterError("variance needs at least two samples");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

inline double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

inline double standard_error(std::span<const double> x) {
  return stddev(x) / std::sqrt(static_cast<double>(x.size()));
}

struct TestResult {
  double statistic = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

/// Two-sided p-value of a Student t statistic.
inline double t_two_sided_p(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

/// Upper-tail p-value P[T >= t].
inline double t_upper_p(double t, double df) {
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  boost::math::students_t dist(df);
  return boost::math::cdf(boost::math::complement(dist, t));
}

/// Welch's unequal-variance two-sample t test, two-sided.
inline TestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  const double va = variance(a) / static_cast<double>(a.size());
  const double vb = variance(b) / static_cast<double>(b.size());
  TestResult r;
  const double diff = mean(a) - mean(b);
  if (va + vb == 0.0) {
    r.statistic = diff == 0.0 ? 0.0 : INFINITY;
    r.df = static_cast<double>(a.size() + b.size() - 2);
    r.p_value = diff == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.statistic = diff / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) /
         (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  r.p_value = t_two_sided_p(r.statistic, r.df);
  return r;
}

/// Chi-square test that two count histograms come from the same law.
/// Adjacent bins are merged (left to right) until every merged bin has
/// expected count >= min_expected in both samples.
inline TestResult chi_square_homogeneity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                         double min_expected = 5.0) {
  const std::size_t bins = std::max(a.size(), b.size());
  auto at = [](std::span<const std::uint64_t> h, std::size_t i) { return i < h.size() ? static_cast<double>(h[i]) : 0.0; };
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    na += at(a, i);
    nb += at(b, i);
  }
  if (na == 0.0 || nb == 0.0) throw ParameterError("chi-square test needs two non-empty samples");
  const double total = na + nb;
  std::vector<std::pair<double, double>> merged;
  double ca = 0.0, cb = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    ca += at(a, i);
    cb += at(b, i);
    const double pooled = ca + cb;
    if (pooled * std::min(na, nb) / total >= min_expected) {
      merged.emplace_back(ca, cb);
      ca = cb = 0.0;
    }
  }
  if (ca + cb > 0.0) {
    if (merged.empty())
      merged.emplace_back(ca, cb);
    else {
      merged.back().first += ca;
      merged.back().second += cb;
    }
  }
  TestResult r;
  r.df = static_cast<double>(merged.size()) - 1.0;
  if (merged.size() < 2) return r;
  for (auto [x, y] : merged) {
    const double pooled = x + y;
    const double ea = pooled * na / total, eb = pooled * nb / total;
    r.statistic += (x - ea) * (x - ea) / ea + (y - eb) * (y - eb) / eb;
  }
  boost::math::chi_squared dist(r.df);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope * x.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ParameterError("fit inputs differ in length");
  if (x.size() < 2) throw ParameterError("fit needs at least two points");
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ParameterError("fit needs at least two distinct x values");
  LinearFit f;
  f.points = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - f.intercept - f.slope * x[i];
      rss += e * e;
    }
    f.slope_stderr = std::sqrt(rss / static_cast<double>(x.size() - 2) / sxx);
  }
  return f;
}

}  // namespace tunegraph::stats
