#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tunegraph/errors.hpp"
#include "tunegraph/graph.hpp"

namespace tunegraph {

enum class IdMode {
  // dense when the file declares its vertex count, compact otherwise
  automatic,
  // labels renumbered 0..n-1 in first-seen order; isolated vertices vanish
  compact,
  // label minus index base is the vertex id; n = max(declared, max id + 1)
  dense,
};

struct EdgeListOptions {
  std::string comment_prefixes = "%#";
  bool one_indexed = true;
  IdMode id_mode = IdMode::automatic;
  // KONECT files may carry weight / timestamp columns after the endpoints.
  bool allow_extra_columns = true;
};

struct IngestReport {
  std::size_t lines = 0;
  std::size_t comment_lines = 0;
  std::size_t edge_lines = 0;
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::optional<std::size_t> declared_vertices;
  bool dense_ids = false;
};

struct IngestResult {
  Graph graph;
  IngestReport report;
  // original_ids[v] is the label of vertex v as written in the file
  std::vector<std::uint64_t> original_ids;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; };
  while (!s.empty() && space(s.front())) s.remove_prefix(1);
  while (!s.empty() && space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

inline std::optional<std::uint64_t> parse_uint(std::string_view tok) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return x;
}

// KONECT size line: "% <edges> <rows> <cols>"
inline std::optional<std::size_t> konect_vertex_count(std::string_view body) {
  const auto toks = split_ws(body);
  if (toks.size() != 3) return std::nullopt;
  const auto e = parse_uint(toks[0]), a = parse_uint(toks[1]), b = parse_uint(toks[2]);
  if (!e || !a || !b) return std::nullopt;
  return static_cast<std::size_t>(std::max(*a, *b));
}

}  // namespace detail

/// Streams an edge list in one pass; memory is linear in the edge count.
/// Labels are only checked against the index base in dense mode, where they
/// are used as ids.
inline IngestResult read_edge_list(std::istream& in, const EdgeListOptions& opt = {}) {
  IngestResult out;
  IngestReport& rep = out.report;
  const std::uint64_t base = opt.one_indexed ? 1 : 0;
  std::optional<bool> dense;  // decided at the first edge line
  std::vector<Edge> edges;
  std::uint64_t max_label = 0;
  GraphBuilder builder;
  std::string line;
  while (std::getline(in, line)) {
    ++rep.lines;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    if (opt.comment_prefixes.find(body.front()) != std::string::npos) {
      ++rep.comment_lines;
      if (!rep.declared_vertices && rep.edge_lines == 0)
        rep.declared_vertices = detail::konect_vertex_count(body.substr(1));
      continue;
    }
    const auto toks = detail::split_ws(body);
    if (toks.size() < 2) throw ParseError(rep.lines, "expected two vertex ids");
    if (toks.size() > 2 && !opt.allow_extra_columns) throw ParseError(rep.lines, "expected exactly two vertex ids");
    const auto a = detail::parse_uint(toks[0]);
    const auto b = detail::parse_uint(toks[1]);
    if (!a || !b) throw ParseError(rep.lines, "vertex ids must be non-negative integers");
    if (!dense)
      dense = opt.id_mode == IdMode::dense || (opt.id_mode == IdMode::automatic && rep.declared_vertices.has_value());
    ++rep.edge_lines;
    if (*dense) {
      if (*a < base || *b < base) throw ParseError(rep.lines, "vertex id 0 in a one-indexed file");
      if (*a - base >= std::numeric_limits<VertexId>::max() || *b - base >= std::numeric_limits<VertexId>::max())
        throw ParseError(rep.lines, "vertex id exceeds the 32-bit range");
      edges.push_back({static_cast<VertexId>(*a - base), static_cast<VertexId>(*b - base)});
      max_label = std::max({max_label, *a, *b});
    } else {
      builder.add(*a, *b);
    }
  }
  if (in.bad()) throw IoError("read failure");
  if (!dense)
    dense = opt.id_mode == IdMode::dense || (opt.id_mode == IdMode::automatic && rep.declared_vertices.has_value());
  rep.dense_ids = *dense;

  BuildReport build;
  if (*dense) {
    std::size_t n = rep.declared_vertices.value_or(0);
    if (!edges.empty()) n = std::max<std::size_t>(n, static_cast<std::size_t>(max_label - base + 1));
    out.graph = make_graph(n, std::move(edges), &build);
    out.original_ids.resize(n);
    for (std::size_t v = 0; v < n; ++v) out.original_ids[v] = v + base;
  } else {
    auto built = std::move(builder).finish();
    out.graph = std::move(built.graph);
    build = built.report;
    out.original_ids = std::move(built.original_ids);
  }
  rep.self_loops = build.self_loops;
  rep.duplicates = build.duplicates;
  rep.vertices = out.graph.vertex_count();
  rep.edges = out.graph.edge_count();
  return out;
}

inline IngestResult read_edge_list(const std::string& path, const EdgeListOptions& opt = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_edge_list(in, opt);
}

/// KONECT-style output: two header comments (the second declares the
/// vertex count, so isolated vertices survive a round trip), then one
/// "u v" line per edge with u < v.
inline void write_edge_list(const Graph& g, std::ostream& out, bool one_indexed = true) {
  const std::uint64_t base = one_indexed ? 1 : 0;
  out << "% sym unweighted\n";
  out << "% " << g.edge_count() << ' ' << g.vertex_count() << ' ' << g.vertex_count() << '\n';
  for (const auto& e : g.edges()) out << (e.u + base) << ' ' << (e.v + base) << '\n';
  if (!out) throw IoError("write failure");
}

inline void write_edge_list(const Graph& g, const std::string& path, bool one_indexed = true) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_edge_list(g, out, one_indexed);
  out.flush();
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace tunegraph
