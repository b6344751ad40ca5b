#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mwc/bipartite.hpp"
#include "mwc/error.hpp"
#include "mwc/graph.hpp"
#include "mwc/norms.hpp"

namespace mwc {

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

inline long long parse_integer(const Token& tok, std::size_t line, const char* what) {
  long long v = 0;
  const auto* end = tok.text.data() + tok.text.size();
  const auto [ptr, ec] = std::from_chars(tok.text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError(line, tok.column, std::string("expected an integer ") + what + ", got '" + std::string(tok.text) + "'");
  return v;
}

// Non-negative decimal or "inf".
inline double parse_weight(const Token& tok, std::size_t line) {
  if (tok.text == "inf") return kInfinite;
  double v = 0.0;
  const auto* end = tok.text.data() + tok.text.size();
  const auto [ptr, ec] = std::from_chars(tok.text.data(), end, v, std::chars_format::general);
  if (ec != std::errc() || ptr != end || std::isnan(v) || std::isinf(v))
    throw ParseError(line, tok.column, "expected a weight, got '" + std::string(tok.text) + "'");
  if (v < 0.0) throw ParseError(line, tok.column, "negative weight");
  return v;
}

inline std::string format_double(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline void expect_arity(const std::vector<Token>& toks, std::size_t want, std::size_t line, const char* form) {
  if (toks.size() < want) {
    const std::size_t col = toks.back().column + toks.back().text.size();
    throw ParseError(line, col, std::string("too few fields, expected '") + form + "'");
  }
  if (toks.size() > want) throw ParseError(line, toks[want].column, std::string("unexpected field, expected '") + form + "'");
}

inline bool skippable(const std::vector<Token>& toks) { return toks.empty() || toks[0].text == "c"; }

}  // namespace detail

/// Reads "p mwc n m k", then k lines "t v" and m lines "e u v w" in any order.
/// Lines starting with "c" and blank lines are ignored.
inline Instance parse_instance(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  long long n = -1, m = 0, k = 0;
  std::size_t header_line = 0;
  std::vector<Vertex> terminals;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;
  std::vector<std::size_t> edge_columns;  // column of the first endpoint
  std::vector<std::size_t> seen_terminal;
  while (std::getline(in, raw)) {
    ++line;
    const auto toks = detail::tokenize(raw);
    if (detail::skippable(toks)) continue;
    const auto tag = toks[0].text;
    if (n < 0) {
      if (tag != "p") throw ParseError(line, toks[0].column, "expected header 'p mwc <n> <m> <k>'");
      detail::expect_arity(toks, 5, line, "p mwc <n> <m> <k>");
      if (toks[1].text != "mwc") throw ParseError(line, toks[1].column, "unknown problem '" + std::string(toks[1].text) + "', expected 'mwc'");
      n = detail::parse_integer(toks[2], line, "vertex count");
      m = detail::parse_integer(toks[3], line, "edge count");
      k = detail::parse_integer(toks[4], line, "terminal count");
      if (n < 0 || n > 10'000'000) throw ParseError(line, toks[2].column, "vertex count out of range");
      if (m < 0) throw ParseError(line, toks[3].column, "negative edge count");
      if (k < 2 || k > n) throw ParseError(line, toks[4].column, "terminal count must lie in 2..n");
      header_line = line;
      seen_terminal.assign(static_cast<std::size_t>(n) + 1, 0);
      continue;
    }
    if (tag == "t") {
      detail::expect_arity(toks, 2, line, "t <vertex>");
      const long long v = detail::parse_integer(toks[1], line, "terminal");
      if (v < 1 || v > n) throw ParseError(line, toks[1].column, "terminal " + std::to_string(v) + " outside 1.." + std::to_string(n));
      if (seen_terminal[static_cast<std::size_t>(v)])
        throw ParseError(line, toks[1].column, "duplicate terminal " + std::to_string(v) + " (first on line " + std::to_string(seen_terminal[static_cast<std::size_t>(v)]) + ")");
      if (static_cast<long long>(terminals.size()) == k) throw ParseError(line, toks[0].column, "more terminal lines than the header's " + std::to_string(k));
      seen_terminal[static_cast<std::size_t>(v)] = line;
      terminals.push_back(static_cast<Vertex>(v));
    } else if (tag == "e") {
      detail::expect_arity(toks, 4, line, "e <u> <v> <w>");
      const long long u = detail::parse_integer(toks[1], line, "endpoint");
      const long long v = detail::parse_integer(toks[2], line, "endpoint");
      if (u < 1 || u > n) throw ParseError(line, toks[1].column, "endpoint " + std::to_string(u) + " outside 1.." + std::to_string(n));
      if (v < 1 || v > n) throw ParseError(line, toks[2].column, "endpoint " + std::to_string(v) + " outside 1.." + std::to_string(n));
      if (u == v) throw ParseError(line, toks[2].column, "self-loop at vertex " + std::to_string(u));
      const double w = detail::parse_weight(toks[3], line);
      if (static_cast<long long>(edges.size()) == m) throw ParseError(line, toks[0].column, "more edge lines than the header's " + std::to_string(m));
      edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
      edge_lines.push_back(line);
      edge_columns.push_back(toks[1].column);
    } else if (tag == "p") {
      throw ParseError(line, toks[0].column, "second header (first on line " + std::to_string(header_line) + ")");
    } else {
      throw ParseError(line, toks[0].column, "unknown line type '" + std::string(tag) + "'");
    }
  }
  if (n < 0) throw ParseError(line + 1, 1, "missing header 'p mwc <n> <m> <k>'");
  if (static_cast<long long>(terminals.size()) != k)
    throw ParseError(line + 1, 1, "found " + std::to_string(terminals.size()) + " terminal lines, header declares " + std::to_string(k));
  if (static_cast<long long>(edges.size()) != m)
    throw ParseError(line + 1, 1, "found " + std::to_string(edges.size()) + " edge lines, header declares " + std::to_string(m));
  std::map<std::pair<Vertex, Vertex>, std::size_t> first;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto key = std::minmax(edges[i].u, edges[i].v);
    const auto [it, fresh] = first.emplace(std::pair{key.first, key.second}, edge_lines[i]);
    if (!fresh)
      throw ParseError(edge_lines[i], edge_columns[i], "duplicate edge " + std::to_string(key.first) + "-" + std::to_string(key.second) + " (first on line " + std::to_string(it->second) + ")");
  }
  const int nv = static_cast<int>(n);
  return {WeightedGraph(nv, std::move(edges)), TerminalSet(std::move(terminals), nv)};
}

inline Instance parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_instance(in);
}

inline std::string write_instance(const WeightedGraph& g, const TerminalSet& terminals) {
  std::string out = "p mwc " + std::to_string(g.num_vertices()) + " " + std::to_string(g.num_edges()) + " " + std::to_string(terminals.size()) + "\n";
  for (Vertex t : terminals) out += "t " + std::to_string(t) + "\n";
  for (const Edge& e : g.edges()) out += "e " + std::to_string(e.u) + " " + std::to_string(e.v) + " " + detail::format_double(e.w) + "\n";
  return out;
}

inline std::string write_instance(const Instance& inst) { return write_instance(inst.graph, inst.terminals); }

/// "b k n_R t", then exactly n_R lines, one per right vertex, listing its
/// neighbors as 1-based left indices. A blank line is an empty neighborhood.
inline SsbveInstance parse_bipartite(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  SsbveInstance out;
  long long right = -1;
  while (std::getline(in, raw)) {
    ++line;
    const auto toks = detail::tokenize(raw);
    if (right < 0) {
      if (detail::skippable(toks)) continue;
      if (toks[0].text != "b") throw ParseError(line, toks[0].column, "expected header 'b <k> <n_R> <t>'");
      detail::expect_arity(toks, 4, line, "b <k> <n_R> <t>");
      const long long k = detail::parse_integer(toks[1], line, "left size");
      right = detail::parse_integer(toks[2], line, "right size");
      const long long t = detail::parse_integer(toks[3], line, "target size");
      if (k < 1 || k > 1'000'000) throw ParseError(line, toks[1].column, "left size out of range");
      if (right < 0) throw ParseError(line, toks[2].column, "negative right size");
      if (t < 1 || t > k) throw ParseError(line, toks[3].column, "t must lie in 1..k");
      out.graph.left = static_cast<int>(k);
      out.t = static_cast<int>(t);
      continue;
    }
    if (!toks.empty() && toks[0].text == "c") continue;
    if (static_cast<long long>(out.graph.right.size()) == right) {
      if (toks.empty()) continue;
      throw ParseError(line, toks[0].column, "more right-vertex lines than the header's " + std::to_string(right));
    }
    std::vector<int> nb;
    for (const auto& tok : toks) {
      const long long i = detail::parse_integer(tok, line, "left index");
      if (i < 1 || i > out.graph.left) throw ParseError(line, tok.column, "left index " + std::to_string(i) + " outside 1.." + std::to_string(out.graph.left));
      nb.push_back(static_cast<int>(i - 1));
    }
    out.graph.right.push_back(std::move(nb));
  }
  if (right < 0) throw ParseError(line + 1, 1, "missing header 'b <k> <n_R> <t>'");
  if (static_cast<long long>(out.graph.right.size()) != right)
    throw ParseError(line + 1, 1, "found " + std::to_string(out.graph.right.size()) + " right-vertex lines, header declares " + std::to_string(right));
  return out;
}

inline SsbveInstance parse_bipartite(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_bipartite(in);
}

inline std::string write_bipartite(const SsbveInstance& inst) {
  std::string out = "b " + std::to_string(inst.graph.left) + " " + std::to_string(inst.graph.right_size()) + " " + std::to_string(inst.t) + "\n";
  for (const auto& nb : inst.graph.right) {
    for (std::size_t j = 0; j < nb.size(); ++j) out += (j ? " " : "") + std::to_string(nb[j] + 1);
    out += "\n";
  }
  return out;
}

/// Reads a whole file; the loader used by parse_norm for "nmax:<file>".
inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

namespace detail {

inline double parse_exponent(std::string_view s) {
  if (s == "inf") return kInfinite;
  double p = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), p);
  if (ec != std::errc() || ptr != s.data() + s.size() || !(p >= 1.0) || std::isinf(p))
    throw std::invalid_argument("norm exponent must be a number >= 1 or 'inf', got '" + std::string(s) + "'");
  return p;
}

}  // namespace detail

/// "lp:<p>", "wlp:<p>:<c1,..,ck>" or "nmax:<bipartite-file>"; p may be "inf".
inline NormSpec parse_norm(std::string_view tag, int k, const std::function<std::string(const std::string&)>& load = read_file) {
  const auto colon = tag.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("norm must look like lp:<p>, wlp:<p>:<weights> or nmax:<file>");
  const auto family = tag.substr(0, colon);
  const auto rest = tag.substr(colon + 1);
  if (family == "lp") return NormSpec::lp(k, detail::parse_exponent(rest));
  if (family == "wlp") {
    const auto c2 = rest.find(':');
    if (c2 == std::string_view::npos) throw std::invalid_argument("wlp needs weights: wlp:<p>:<c1,..,ck>");
    const double p = detail::parse_exponent(rest.substr(0, c2));
    std::vector<double> c;
    std::string_view list = rest.substr(c2 + 1);
    while (true) {
      const auto comma = list.find(',');
      const auto item = list.substr(0, comma);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc() || ptr != item.data() + item.size()) throw std::invalid_argument("bad norm weight '" + std::string(item) + "'");
      c.push_back(v);
      if (comma == std::string_view::npos) break;
      list = list.substr(comma + 1);
    }
    if (static_cast<int>(c.size()) != k)
      throw std::invalid_argument("wlp lists " + std::to_string(c.size()) + " weights for " + std::to_string(k) + " terminals");
    return NormSpec::weighted_lp(p, std::move(c));
  }
  if (family == "nmax") {
    const auto bip = parse_bipartite(load(std::string(rest)));
    if (bip.graph.left != k)
      throw std::invalid_argument("nmax file has " + std::to_string(bip.graph.left) + " left vertices for " + std::to_string(k) + " terminals");
    return NormSpec::neighborhood_max(k, bip.graph.right);
  }
  throw std::invalid_argument("unknown norm family '" + std::string(family) + "'");
}

}  // namespace mwc
