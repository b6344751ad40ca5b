#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mwc/bipartite.hpp"
#include "mwc/graph.hpp"
#include "mwc/norms.hpp"
#include "mwc/utc.hpp"

namespace mwc {

struct OracleBudget {
  std::uint64_t max_assignments = 10'000'000;
};

struct OracleResult {
  Partition partition;
  CutVector cuts;
  double objective = 0.0;
  std::vector<int> assignment;  // part index per vertex
  std::uint64_t evaluated = 0;
};

namespace detail {

// base^exp, or max+1 once it passes max.
inline std::uint64_t capped_power(std::uint64_t base, int exp, std::uint64_t max) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > max / std::max<std::uint64_t>(base, 1)) return max + 1;
    out *= base;
  }
  return out;
}

inline std::uint64_t capped_binomial(int n, int r, std::uint64_t max) {
  long double c = 1.0L;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c > static_cast<long double>(max) ? max + 1 : static_cast<std::uint64_t>(std::llround(static_cast<double>(c)));
}

}  // namespace detail

/// Exact multiway cut by enumerating every assignment of non-terminals to terminal
/// parts, in lexicographic order; the first strictly better assignment is kept.
inline OracleResult brute_force_multiway(const WeightedGraph& g, const TerminalSet& terminals, const NormSpec& spec, OracleBudget budget = {}) {
  const int n = g.num_vertices();
  const int k = terminals.size();
  if (spec.dimension() != k) throw std::invalid_argument("norm dimension must equal the number of terminals");
  std::vector<Vertex> free;
  for (Vertex v = 1; v <= n; ++v)
    if (!terminals.is_terminal(v)) free.push_back(v);
  const int r = static_cast<int>(free.size());
  if (detail::capped_power(static_cast<std::uint64_t>(k), r, budget.max_assignments) > budget.max_assignments)
    throw BudgetExceeded(std::to_string(k) + "^" + std::to_string(r) + " assignments exceed the oracle budget");

  std::vector<int> part(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < k; ++i) part[static_cast<std::size_t>(terminals[static_cast<std::size_t>(i)] - 1)] = i;
  CutVector cut = cut_vector(g, part, k);

  auto move = [&](Vertex v, int to) {
    const int from = part[static_cast<std::size_t>(v - 1)];
    for (const auto& inc : g.neighbors(v)) {
      const int c = part[static_cast<std::size_t>(inc.to - 1)];
      if (from != c) {
        cut[static_cast<std::size_t>(from)] -= inc.w;
        cut[static_cast<std::size_t>(c)] -= inc.w;
      }
      if (to != c) {
        cut[static_cast<std::size_t>(to)] += inc.w;
        cut[static_cast<std::size_t>(c)] += inc.w;
      }
    }
    part[static_cast<std::size_t>(v - 1)] = to;
  };

  OracleResult best;
  best.objective = spec.eval(cut);
  best.assignment = part;
  best.evaluated = 1;
  while (true) {
    int pos = r - 1;
    while (pos >= 0 && part[static_cast<std::size_t>(free[static_cast<std::size_t>(pos)] - 1)] == k - 1) {
      move(free[static_cast<std::size_t>(pos)], 0);
      --pos;
    }
    if (pos < 0) break;
    const Vertex v = free[static_cast<std::size_t>(pos)];
    move(v, part[static_cast<std::size_t>(v - 1)] + 1);
    ++best.evaluated;
    const double value = spec.eval(cut);
    if (value < best.objective - 1e-9 * std::max(1.0, best.objective)) {
      best.objective = value;
      best.assignment = part;
    }
  }
  best.partition = partition_from_assignment(terminals, best.assignment);
  best.cuts = cut_vector(g, best.assignment, k);
  best.objective = spec.eval(best.cuts);
  return best;
}

struct SsbveSolution {
  std::vector<int> set;  // left indices, ascending
  int value = 0;         // |N(S)|
};

/// Exact SSBVE over all t-subsets of L in lexicographic order.
inline SsbveSolution brute_force_ssbve(const Bipartite& bip, int t, OracleBudget budget = {}) {
  bip.validate();
  const int k = bip.left;
  if (t < 0 || t > k) throw std::invalid_argument("t must lie in 0..|L|");
  if (detail::capped_binomial(k, t, budget.max_assignments) > budget.max_assignments)
    throw BudgetExceeded("C(" + std::to_string(k) + ", " + std::to_string(t) + ") subsets exceed the oracle budget");
  std::vector<int> cur(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) cur[static_cast<std::size_t>(i)] = i;
  SsbveSolution best{cur, bip.neighborhood_size(cur)};
  while (true) {
    int i = t - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == k - t + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < t; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    const int value = bip.neighborhood_size(cur);
    if (value < best.value) best = {cur, value};
  }
  return best;
}

/// Exact UTC by scanning every vertex bitmask in increasing order and measuring
/// each boundary from scratch. Deliberately shares no code with the gray-code enumerator.
inline UtcSolution brute_force_utc(const UtcInstance& inst, OracleBudget budget = {}) {
  const WeightedGraph& g = inst.graph;
  const int n = g.num_vertices();
  if (n >= 63 || (std::uint64_t{1} << n) > budget.max_assignments) throw BudgetExceeded("2^n subsets exceed the oracle budget");
  if (!(inst.rho > 0.0 && inst.rho <= 1.0)) throw std::invalid_argument("rho must lie in (0, 1]");
  double total = 0.0;
  for (double m : inst.measure) total += m;
  const double target = inst.rho * total;
  std::uint64_t terminal_mask = 0;
  for (Vertex t : inst.terminals) terminal_mask |= std::uint64_t{1} << (t - 1);

  bool found = false;
  std::uint64_t best_mask = 0;
  double best_cost = 0.0, best_measure = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (std::popcount(mask & terminal_mask) > 1) continue;
    double measure = 0.0;
    for (int v = 0; v < n; ++v)
      if (mask >> v & 1) measure += inst.measure[static_cast<std::size_t>(v)];
    if (measure + 1e-12 * total < target) continue;
    double cost = 0.0;
    for (const Edge& e : g.edges())
      if ((mask >> (e.u - 1) & 1) != (mask >> (e.v - 1) & 1)) cost += e.w;
    const bool take = !found || cost < best_cost - kTolerance || (cost <= best_cost + kTolerance && measure > best_measure + kTolerance);
    if (take) {
      found = true;
      best_mask = mask;
      best_cost = cost;
      best_measure = measure;
    }
  }
  if (!found) throw InfeasibleError("no set with at most one terminal reaches the measure bound");
  VertexSet s(n);
  for (int v = 0; v < n; ++v)
    if (best_mask >> v & 1) s.insert(v + 1);
  return {s, best_cost, best_measure, UtcBackend::exact};
}

}  // namespace mwc
