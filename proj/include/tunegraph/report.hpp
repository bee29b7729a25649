#pragma once

// Serialization of analysis results: CSV matrices and curves, JSON
// documents, and SVG heatmaps. Undefined values are empty CSV fields and
// JSON nulls. Numbers are written in shortest round-trip form with '.' as
// the decimal separator, independent of the C locale.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tunegraph/assortativity.hpp"
#include "tunegraph/io.hpp"
#include "tunegraph/joint.hpp"

namespace tunegraph::report {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline std::string format_number(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

inline std::string format_cell(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

inline json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

inline json to_json(const CoefficientReport& r) {
  return json{{"schema_version", kSchemaVersion},
              {"kind", "coefficients"},
              {"vertices", r.vertex_count},
              {"edges", r.edge_count},
              {"pearson", optional_json(r.pearson)},
              {"spearman", optional_json(r.spearman)},
              {"kendall", optional_json(r.kendall)},
              {"concordant", r.concordant},
              {"discordant", r.discordant},
              {"excluded_same_edge_pairs", r.excluded_same_edge_pairs},
              {"tie_fraction", r.tie_fraction}};
}

inline json to_json(const IngestReport& r) {
  json j{{"lines", r.lines},       {"comment_lines", r.comment_lines}, {"edge_lines", r.edge_lines},
         {"self_loops", r.self_loops}, {"duplicates", r.duplicates},   {"vertices", r.vertices},
         {"edges", r.edges},       {"dense_ids", r.dense_ids}};
  j["declared_vertices"] = r.declared_vertices ? json(*r.declared_vertices) : json(nullptr);
  return j;
}

inline json to_json(const BucketScheme& s) {
  return json{{"num_buckets", s.size()}, {"base", s.base()}, {"d_max", s.d_max()}, {"boundaries", s.boundaries()}};
}

inline json to_json(const JointHistogram& h) {
  json probs = json::array();
  for (int i = 0; i < h.scheme.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < h.scheme.size(); ++j) row.push_back(h.probs(i, j));
    probs.push_back(row);
  }
  return json{{"schema_version", kSchemaVersion}, {"kind", "joint_histogram"}, {"buckets", to_json(h.scheme)},
              {"oriented_pairs", h.total},       {"probabilities", probs},   {"marginals", h.marginals}};
}

inline json to_json(const ConditionalHeatmap& m) {
  json change = json::array(), samples = json::array();
  for (int i = 0; i < m.scheme.size(); ++i) {
    json row = json::array(), srow = json::array();
    for (int j = 0; j < m.scheme.size(); ++j) {
      row.push_back(optional_json(m.change(i, j)));
      srow.push_back(m.samples(i, j));
    }
    change.push_back(row);
    samples.push_back(srow);
  }
  return json{{"schema_version", kSchemaVersion}, {"kind", "conditional_change"}, {"buckets", to_json(m.scheme)},
              {"change", change},                {"samples", samples}};
}

inline json curve_json(const CCDFCurve& c) {
  return json{{"empty", c.empty}, {"degree", c.x}, {"ccdf", c.y}};
}

inline json to_json(const CCDFCurves& c) {
  json cond = json::array();
  for (std::size_t l = 0; l < c.conditional.size(); ++l) {
    json entry = curve_json(c.conditional[l]);
    entry["level"] = c.levels[l];
    entry["bucket"] = c.conditional_buckets[l];
    cond.push_back(entry);
  }
  return json{{"schema_version", kSchemaVersion}, {"kind", "ccdf_curves"}, {"buckets", to_json(c.scheme)},
              {"node", curve_json(c.node)},      {"edge", curve_json(c.edge)}, {"conditional", cond}};
}

namespace detail {

template <class Cell>
void write_matrix_csv(std::ostream& out, const BucketScheme& s, Cell cell) {
  out << "bucket_lower";
  for (int j = 0; j < s.size(); ++j) out << ',' << format_number(s.lower(j));
  out << '\n';
  for (int i = 0; i < s.size(); ++i) {
    out << format_number(s.lower(i));
    for (int j = 0; j < s.size(); ++j) out << ',' << cell(i, j);
    out << '\n';
  }
}

}  // namespace detail

/// Square matrix: header row of bucket lower bounds, then one row per
/// bucket led by its lower bound.
inline void write_csv(std::ostream& out, const JointHistogram& h) {
  detail::write_matrix_csv(out, h.scheme, [&](int i, int j) { return format_number(h.probs(i, j)); });
}

inline void write_csv(std::ostream& out, const ConditionalHeatmap& m) {
  detail::write_matrix_csv(out, m.scheme, [&](int i, int j) { return format_cell(m.change(i, j)); });
}

/// Long format: curve,level,degree,ccdf. Level is empty for node/edge.
inline void write_csv(std::ostream& out, const CCDFCurves& c) {
  out << "curve,level,degree,ccdf\n";
  auto emit = [&](const std::string& name, const std::string& level, const CCDFCurve& curve) {
    for (std::size_t i = 0; i < curve.x.size(); ++i)
      out << name << ',' << level << ',' << curve.x[i] << ',' << format_number(curve.y[i]) << '\n';
  };
  emit("node", "", c.node);
  emit("edge", "", c.edge);
  for (std::size_t l = 0; l < c.conditional.size(); ++l)
    emit("conditional", format_number(c.levels[l]), c.conditional[l]);
}

namespace detail {

struct Rgb {
  int r, g, b;
};

inline Rgb lerp(Rgb a, Rgb b, double t) {
  t = std::clamp(t, 0.0, 1.0);
  return {static_cast<int>(std::lround(a.r + (b.r - a.r) * t)), static_cast<int>(std::lround(a.g + (b.g - a.g) * t)),
          static_cast<int>(std::lround(a.b + (b.b - a.b) * t))};
}

inline std::string hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

template <class Color>
void write_heatmap_svg(std::ostream& out, const BucketScheme& s, const std::string& title, Color color) {
  const int cell = 24, margin = 56, n = s.size();
  const int size = margin + n * cell + 16;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size + 24
      << "\" font-family=\"sans-serif\" font-size=\"9\">\n";
  out << "<title>" << title << "</title>\n";
  out << "<text x=\"" << margin << "\" y=\"14\" font-size=\"12\">" << title << "</text>\n";
  // bucket 0 at the bottom left, X along the horizontal axis
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int x = margin + i * cell, y = 24 + (n - 1 - j) * cell;
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
          << color(i, j) << "\"/>\n";
    }
  for (int i = 0; i < n; i += std::max(1, n / 7)) {
    const std::string label = format_number(std::round(s.lower(i) * 10.0) / 10.0);
    out << "<text x=\"" << margin + i * cell << "\" y=\"" << 24 + n * cell + 12 << "\">" << label << "</text>\n";
    out << "<text x=\"4\" y=\"" << 24 + (n - i) * cell - 8 << "\">" << label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace detail

/// Joint probabilities on a logarithmic color scale; empty cells are grey.
inline void write_svg(std::ostream& out, const JointHistogram& h) {
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < h.scheme.size(); ++i)
    for (int j = 0; j < h.scheme.size(); ++j)
      if (h.probs(i, j) > 0.0) {
        lo = std::min(lo, h.probs(i, j));
        hi = std::max(hi, h.probs(i, j));
      }
  const double span = hi > lo ? std::log(hi) - std::log(lo) : 1.0;
  detail::write_heatmap_svg(out, h.scheme, "joint degree distribution", [&](int i, int j) {
    const double p = h.probs(i, j);
    if (p <= 0.0) return std::string("#e0e0e0");
    const double t = (std::log(p) - std::log(lo)) / span;
    return detail::hex(t < 0.5 ? detail::lerp({13, 8, 135}, {204, 71, 120}, 2 * t)
                               : detail::lerp({204, 71, 120}, {240, 249, 33}, 2 * t - 1));
  });
}

/// Diverging scale: increases red, decreases blue, undefined grey.
inline void write_svg(std::ostream& out, const ConditionalHeatmap& m) {
  detail::write_heatmap_svg(out, m.scheme, "conditional change", [&](int i, int j) {
    const auto v = m.change(i, j);
    if (!v) return std::string("#e0e0e0");
    const detail::Rgb white{255, 255, 255};
    return detail::hex(*v >= 0 ? detail::lerp(white, {178, 24, 43}, *v) : detail::lerp(white, {33, 102, 172}, -*v));
  });
}

/// Log-log step plot of the node, edge and conditional curves.
inline void write_svg(std::ostream& out, const CCDFCurves& c) {
  const double w = 480, h = 360, m = 48;
  double xmax = 2.0, ymin = 1.0;
  auto scan = [&](const CCDFCurve& k) {
    for (std::size_t i = 0; i < k.x.size(); ++i) {
      xmax = std::max(xmax, static_cast<double>(k.x[i]));
      if (k.y[i] > 0.0) ymin = std::min(ymin, k.y[i]);
    }
  };
  scan(c.node);
  scan(c.edge);
  for (const auto& k : c.conditional) scan(k);
  const double lx = std::log(xmax + 1.0), ly = -std::log(ymin);
  auto px = [&](double x) { return m + (w - 2 * m) * std::log(x + 1.0) / lx; };
  auto py = [&](double y) { return m + (h - 2 * m) * (-std::log(y)) / (ly > 0 ? ly : 1.0); };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  out << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << w - 2 * m << "\" height=\"" << h - 2 * m
      << "\" fill=\"none\" stroke=\"#999\"/>\n";
  const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d"};
  int slot = 0;
  auto line = [&](const CCDFCurve& k, const std::string& label, const char* stroke, bool dashed) {
    if (k.x.empty()) return;
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\"" << (dashed ? " stroke-dasharray=\"4 3\"" : "")
        << " points=\"";
    for (std::size_t i = 0; i < k.x.size(); ++i) {
      if (k.y[i] <= 0.0) continue;
      out << format_number(px(static_cast<double>(std::max<std::size_t>(k.x[i], 1)))) << ','
          << format_number(py(k.y[i])) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << w - m + 4 - 100 << "\" y=\"" << m + 12 + 12 * slot << "\" fill=\"" << stroke << "\">"
        << label << "</text>\n";
    ++slot;
  };
  line(c.node, "node", "#000000", false);
  line(c.edge, "edge", "#555555", true);
  for (std::size_t l = 0; l < c.conditional.size(); ++l)
    line(c.conditional[l], "c=" + format_number(c.levels[l]), palette[l % 7], false);
  out << "</svg>\n";
}

template <class T>
std::string to_csv_string(const T& x) {
  std::ostringstream s;
  write_csv(s, x);
  return s.str();
}

}  // namespace tunegraph::report
