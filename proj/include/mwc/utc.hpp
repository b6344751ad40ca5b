#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mwc/graph.hpp"
#include "mwc/max_flow.hpp"

namespace mwc {

enum class UtcBackend { exact, heuristic };

inline constexpr int kExactUtcCap = 22;

/// Measure slack granted by the heuristic backend: it guarantees mu(S) >= (rho/4) mu(V).
inline constexpr double kHeuristicMeasureSlack = 0.25;

struct UtcInstance {
  const WeightedGraph& graph;
  const TerminalSet& terminals;
  std::span<const double> measure;  // indexed v-1
  double rho;
};

struct UtcSolution {
  VertexSet set;
  double cost = 0.0;
  double measure = 0.0;
  UtcBackend backend = UtcBackend::exact;
};

inline std::string_view to_string(UtcBackend b) { return b == UtcBackend::exact ? "exact" : "heuristic"; }

/// Resolves "exact", "heuristic" or "auto" (exact up to the enumeration cap).
inline UtcBackend utc_backend(std::string_view tag, int n) {
  if (tag == "exact") return UtcBackend::exact;
  if (tag == "heuristic") return UtcBackend::heuristic;
  if (tag == "auto") return n <= kExactUtcCap ? UtcBackend::exact : UtcBackend::heuristic;
  throw std::invalid_argument("unknown UTC backend '" + std::string(tag) + "'");
}

inline double measure_of(std::span<const double> mu, const VertexSet& s) {
  double total = 0.0;
  for (Vertex v : s.members()) total += mu[static_cast<std::size_t>(v - 1)];
  return total;
}

namespace detail {

inline double total_measure(const WeightedGraph& g, std::span<const double> mu) {
  if (static_cast<int>(mu.size()) != g.num_vertices()) throw std::invalid_argument("measure length does not match vertex count");
  double total = 0.0;
  for (double m : mu) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw std::invalid_argument("measure must be finite and non-negative");
    total += m;
  }
  if (!(total > 0.0)) throw std::invalid_argument("total measure must be positive");
  return total;
}

inline void check_rho(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in (0, 1]");
}

// Measure comparisons carry a relative slack so a set hitting the bound exactly is not lost to rounding.
inline bool meets(double measure, double target, double total) { return measure + 1e-12 * total >= target; }

// Lower cost wins; within tolerance the larger measure wins; otherwise the earlier candidate stays.
inline bool better(double cost, double measure, double best_cost, double best_measure) {
  if (cost < best_cost - kTolerance) return true;
  if (cost > best_cost + kTolerance) return false;
  return measure > best_measure + kTolerance;
}

}  // namespace detail

/// Exact UTC for several rho values at once: one enumeration of every set with at
/// most one terminal, answered per threshold. Entry j is empty when rho_j is infeasible.
inline std::vector<std::optional<UtcSolution>> solve_utc_exact_batch(const WeightedGraph& g, const TerminalSet& terminals,
                                                                     std::span<const double> mu, std::span<const double> rhos) {
  const int n = g.num_vertices();
  if (n > kExactUtcCap) throw BudgetExceeded("exact UTC enumerates 2^n sets; n = " + std::to_string(n) + " exceeds the cap of 22");
  const double total = detail::total_measure(g, mu);
  for (double r : rhos) detail::check_rho(r);

  std::vector<std::size_t> order(rhos.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rhos[a] < rhos[b]; });
  std::vector<double> targets;
  for (std::size_t j : order) targets.push_back(rhos[j] * total);

  std::vector<Vertex> free;
  for (Vertex v = 1; v <= n; ++v)
    if (!terminals.is_terminal(v)) free.push_back(v);
  const int r = static_cast<int>(free.size());

  // Split measure tables: free-vertex mask -> measure via two lookups.
  const int lo_bits = std::min(r, 11);
  const int hi_bits = r - lo_bits;
  std::vector<double> lo(std::size_t{1} << lo_bits, 0.0), hi(std::size_t{1} << hi_bits, 0.0);
  for (std::size_t m = 1; m < lo.size(); ++m) {
    const int b = std::countr_zero(m);
    lo[m] = lo[m & (m - 1)] + mu[static_cast<std::size_t>(free[static_cast<std::size_t>(b)] - 1)];
  }
  for (std::size_t m = 1; m < hi.size(); ++m) {
    const int b = std::countr_zero(m);
    hi[m] = hi[m & (m - 1)] + mu[static_cast<std::size_t>(free[static_cast<std::size_t>(lo_bits + b)] - 1)];
  }

  struct Best {
    double cost = kInfinite;
    double measure = -1.0;
    int seed = -2;
    std::uint64_t mask = 0;
  };
  std::vector<Best> at(targets.size());

  std::vector<double> w_in(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<char> in(static_cast<std::size_t>(n) + 1, 0);
  auto toggle = [&](Vertex v, double& cost) {
    const auto vi = static_cast<std::size_t>(v);
    const double delta = g.weighted_degree(v) - 2.0 * w_in[vi];
    const double sign = in[vi] ? -1.0 : 1.0;
    cost += sign * delta;
    in[vi] ^= 1;
    for (const auto& inc : g.neighbors(v)) w_in[static_cast<std::size_t>(inc.to)] += sign * inc.w;
  };

  // seed -1: no terminal; seed i: terminal i.
  for (int seed = -1; seed < terminals.size(); ++seed) {
    std::fill(w_in.begin(), w_in.end(), 0.0);
    std::fill(in.begin(), in.end(), 0);
    double cost = 0.0;
    double base = 0.0;
    if (seed >= 0) {
      const Vertex t = terminals[static_cast<std::size_t>(seed)];
      toggle(t, cost);
      base = mu[static_cast<std::size_t>(t - 1)];
    }
    std::uint64_t mask = 0;
    const std::uint64_t count = std::uint64_t{1} << r;
    for (std::uint64_t step = 0; step < count; ++step) {
      if (step > 0) {
        const int b = std::countr_zero(step);
        mask ^= std::uint64_t{1} << b;
        toggle(free[static_cast<std::size_t>(b)], cost);
      }
      const double m = base + lo[mask & ((std::uint64_t{1} << lo_bits) - 1)] + hi[mask >> lo_bits];
      const auto it = std::upper_bound(targets.begin(), targets.end(), m + 1e-12 * total);
      if (it == targets.begin()) continue;
      Best& slot = at[static_cast<std::size_t>(it - targets.begin() - 1)];
      if (detail::better(cost, m, slot.cost, slot.measure)) slot = {cost, m, seed, mask};
    }
  }

  // Suffix minimum: a set meeting a larger threshold meets every smaller one.
  for (std::size_t j = at.size(); j-- > 1;)
    if (at[j].seed != -2 && (at[j - 1].seed == -2 || detail::better(at[j].cost, at[j].measure, at[j - 1].cost, at[j - 1].measure)))
      at[j - 1] = at[j];

  std::vector<std::optional<UtcSolution>> out(rhos.size());
  for (std::size_t j = 0; j < at.size(); ++j) {
    if (at[j].seed == -2) continue;
    VertexSet s(n);
    if (at[j].seed >= 0) s.insert(terminals[static_cast<std::size_t>(at[j].seed)]);
    for (int b = 0; b < r; ++b)
      if (at[j].mask >> b & 1) s.insert(free[static_cast<std::size_t>(b)]);
    UtcSolution sol{s, boundary_weight(g, s), measure_of(mu, s), UtcBackend::exact};
    out[order[j]] = std::move(sol);
  }
  return out;
}

inline UtcSolution solve_utc_exact(const UtcInstance& inst) {
  const double rho[] = {inst.rho};
  auto res = solve_utc_exact_batch(inst.graph, inst.terminals, inst.measure, rho);
  if (!res[0]) throw InfeasibleError("no set with at most one terminal reaches the measure bound");
  return std::move(*res[0]);
}

/// Candidate pool for the heuristic backend. Built once per measure, queried per rho.
class UtcHeuristic {
 public:
  UtcHeuristic(const WeightedGraph& g, const TerminalSet& terminals, std::span<const double> mu)
      : g_(g), mu_(mu.begin(), mu.end()), total_(detail::total_measure(g, mu)) {
    const int n = g.num_vertices();
    double sum = 0.0;
    int positive = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      if (g.effective_weight(e) > 0.0) {
        sum += g.effective_weight(e);
        ++positive;
      }
    const double unit = positive ? sum / positive : 1.0;

    std::vector<Vertex> by_measure;
    for (Vertex v = 1; v <= n; ++v)
      if (!terminals.is_terminal(v)) by_measure.push_back(v);
    std::stable_sort(by_measure.begin(), by_measure.end(),
                     [&](Vertex a, Vertex b) { return mu_[static_cast<std::size_t>(a - 1)] > mu_[static_cast<std::size_t>(b - 1)]; });

    for (int seed = -1; seed < terminals.size(); ++seed) {
      VertexSet start(n);
      if (seed >= 0) start.insert(terminals[static_cast<std::size_t>(seed)]);
      grow(start, terminals, unit);
      VertexSet sweep = start;
      if (!sweep.empty()) add(sweep);
      for (Vertex v : by_measure) {
        sweep.insert(v);
        add(sweep);
      }
    }
    for (auto& cut : isolating_cuts(g, terminals)) add(cut.set);
  }

  std::size_t pool_size() const noexcept { return pool_.size(); }

  /// Cheapest candidate meeting the full bound, else the cheapest meeting a quarter of it.
  std::optional<UtcSolution> query(double rho) const {
    detail::check_rho(rho);
    for (double target : {rho * total_, kHeuristicMeasureSlack * rho * total_}) {
      const Candidate* best = nullptr;
      for (const auto& c : pool_)
        if (detail::meets(c.measure, target, total_) && (!best || detail::better(c.cost, c.measure, best->cost, best->measure))) best = &c;
      if (best) return UtcSolution{best->set, best->cost, best->measure, UtcBackend::heuristic};
    }
    return std::nullopt;
  }

 private:
  struct Candidate {
    VertexSet set;
    double cost;
    double measure;
  };

  void add(const VertexSet& s) { pool_.push_back({s, boundary_weight(g_, s), measure_of(mu_, s)}); }

  // Greedy growth by measure gained per unit of boundary increase; records every prefix.
  void grow(VertexSet s, const TerminalSet& terminals, double unit) {
    const int n = g_.num_vertices();
    std::vector<double> w_in(static_cast<std::size_t>(n) + 1, 0.0);
    for (Vertex v : s.members())
      for (const auto& inc : g_.neighbors(v)) w_in[static_cast<std::size_t>(inc.to)] += inc.w;
    bool has_terminal = terminals.count_in(s) > 0;
    if (!s.empty()) add(s);
    while (true) {
      Vertex pick = 0;
      double pick_score = -1.0;
      for (Vertex v = 1; v <= n; ++v) {
        if (s.contains(v) || (has_terminal && terminals.is_terminal(v))) continue;
        const double growth = g_.weighted_degree(v) - 2.0 * w_in[static_cast<std::size_t>(v)];
        const double score = mu_[static_cast<std::size_t>(v - 1)] / (std::max(growth, 0.0) + unit);
        if (score > pick_score + 1e-15) {
          pick_score = score;
          pick = v;
        }
      }
      if (pick == 0) break;
      s.insert(pick);
      has_terminal = has_terminal || terminals.is_terminal(pick);
      for (const auto& inc : g_.neighbors(pick)) w_in[static_cast<std::size_t>(inc.to)] += inc.w;
      add(s);
    }
  }

  const WeightedGraph& g_;
  std::vector<double> mu_;
  double total_;
  std::vector<Candidate> pool_;
};

inline UtcSolution solve_utc_heuristic(const UtcInstance& inst) {
  UtcHeuristic h(inst.graph, inst.terminals, inst.measure);
  auto sol = h.query(inst.rho);
  if (!sol) throw InfeasibleError("no candidate with at most one terminal reaches the relaxed measure bound");
  return std::move(*sol);
}

/// Batch front end over either backend; entry j answers rhos[j].
inline std::vector<std::optional<UtcSolution>> solve_utc_batch(UtcBackend backend, const WeightedGraph& g, const TerminalSet& terminals,
                                                               std::span<const double> mu, std::span<const double> rhos) {
  if (backend == UtcBackend::exact) return solve_utc_exact_batch(g, terminals, mu, rhos);
  UtcHeuristic h(g, terminals, mu);
  std::vector<std::optional<UtcSolution>> out;
  out.reserve(rhos.size());
  for (double r : rhos) out.push_back(h.query(r));
  return out;
}

/// Measure fraction each backend guarantees relative to rho.
inline double guaranteed_measure_factor(UtcBackend b) { return b == UtcBackend::exact ? 1.0 : kHeuristicMeasureSlack; }

}  // namespace mwc
