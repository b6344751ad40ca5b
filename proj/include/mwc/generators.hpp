#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mwc/graph.hpp"

namespace mwc {

enum class WeightMode { unit, integer };  // integer: uniform on 1..10

inline WeightMode parse_weight_mode(std::string_view tag) {
  if (tag == "unit") return WeightMode::unit;
  if (tag == "int" || tag == "integer") return WeightMode::integer;
  throw std::invalid_argument("unknown weight mode '" + std::string(tag) + "'");
}

namespace detail {

// Explicit bit arithmetic so the output does not depend on the standard
// library's distribution implementations.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

inline double draw_weight(std::mt19937_64& rng, WeightMode mode) { return mode == WeightMode::unit ? 1.0 : static_cast<double>(below(rng, 10) + 1); }

inline void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

// k distinct vertices of 1..n, in draw order.
inline std::vector<Vertex> draw_terminals(int n, int k, std::mt19937_64& rng) {
  std::vector<Vertex> pool(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) pool[static_cast<std::size_t>(v)] = v + 1;
  for (int i = 0; i < k; ++i) std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(i) + below(rng, static_cast<std::uint64_t>(n - i))]);
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

inline void check_sizes(int n, int k) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (n < k) throw std::invalid_argument("n must be at least k");
}

}  // namespace detail

/// G(n, p) with k random terminals.
inline Instance generate_gnp(int n, int k, double p, WeightMode mode, std::uint64_t seed) {
  detail::check_sizes(n, k);
  detail::check_probability(p, "p");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (Vertex u = 1; u <= n; ++u)
    for (Vertex v = u + 1; v <= n; ++v)
      if (detail::unit_uniform(rng) < p) edges.push_back({u, v, detail::draw_weight(rng, mode)});
  auto terminals = detail::draw_terminals(n, k, rng);
  return {WeightedGraph(n, std::move(edges)), TerminalSet(std::move(terminals), n)};
}

struct PlantedInstance {
  Instance instance;
  std::vector<int> planted;  // cluster index per vertex (0-based)
  double planted_cost = 0.0; // Σ_i δ(cluster i)
};

/// k contiguous clusters of near-equal size; the terminal of cluster i is its
/// first vertex. Pairs inside a cluster are joined with probability p_in,
/// pairs across clusters with p_out.
inline PlantedInstance generate_planted(int n, int k, double p_in, double p_out, WeightMode mode, std::uint64_t seed) {
  detail::check_sizes(n, k);
  detail::check_probability(p_in, "p_in");
  detail::check_probability(p_out, "p_out");
  std::mt19937_64 rng(seed);
  PlantedInstance out;
  out.planted.resize(static_cast<std::size_t>(n));
  std::vector<Vertex> terminals;
  for (int i = 0, v = 0; i < k; ++i) {
    const int size = n / k + (i < n % k ? 1 : 0);
    terminals.push_back(v + 1);
    for (int j = 0; j < size; ++j, ++v) out.planted[static_cast<std::size_t>(v)] = i;
  }
  std::vector<Edge> edges;
  for (Vertex u = 1; u <= n; ++u)
    for (Vertex v = u + 1; v <= n; ++v) {
      const bool same = out.planted[static_cast<std::size_t>(u - 1)] == out.planted[static_cast<std::size_t>(v - 1)];
      if (detail::unit_uniform(rng) < (same ? p_in : p_out)) edges.push_back({u, v, detail::draw_weight(rng, mode)});
    }
  out.instance = {WeightedGraph(n, std::move(edges)), TerminalSet(std::move(terminals), n)};
  for (const Edge& e : out.instance.graph.edges())
    if (out.planted[static_cast<std::size_t>(e.u - 1)] != out.planted[static_cast<std::size_t>(e.v - 1)]) out.planted_cost += 2.0 * e.w;
  return out;
}

/// Terminals 1..k, each hanging off its own hub k+i; hubs form a path, and the
/// remaining n - 2k vertices are leaves dealt to hubs round-robin.
inline Instance generate_star_chain(int n, int k, WeightMode mode, std::uint64_t seed) {
  detail::check_sizes(n, k);
  if (n < 2 * k) throw std::invalid_argument("star-chain needs n >= 2k");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (int i = 1; i <= k; ++i) edges.push_back({i, k + i, detail::draw_weight(rng, mode)});
  for (int i = 1; i < k; ++i) edges.push_back({k + i, k + i + 1, detail::draw_weight(rng, mode)});
  for (Vertex v = 2 * k + 1; v <= n; ++v) edges.push_back({k + 1 + (v - 2 * k - 1) % k, v, detail::draw_weight(rng, mode)});
  std::vector<Vertex> terminals;
  for (int i = 1; i <= k; ++i) terminals.push_back(i);
  return {WeightedGraph(n, std::move(edges)), TerminalSet(std::move(terminals), n)};
}

/// Generator front end by name: "gnp", "planted-k-part" or "star-chain".
struct GeneratorParams {
  int n = 10;
  int k = 3;
  double p = 0.3;      // gnp edge probability, planted p_in
  double p_out = 0.05; // planted only
  WeightMode weights = WeightMode::unit;
};

inline Instance generate_instance(std::string_view kind, const GeneratorParams& params, std::uint64_t seed) {
  if (kind == "gnp") return generate_gnp(params.n, params.k, params.p, params.weights, seed);
  if (kind == "planted-k-part") return generate_planted(params.n, params.k, params.p, params.p_out, params.weights, seed).instance;
  if (kind == "star-chain") return generate_star_chain(params.n, params.k, params.weights, seed);
  throw std::invalid_argument("unknown generator '" + std::string(kind) + "'");
}

}  // namespace mwc
