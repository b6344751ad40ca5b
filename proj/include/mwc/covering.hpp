#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mwc/graph.hpp"
#include "mwc/max_flow.hpp"
#include "mwc/norms.hpp"
#include "mwc/utc.hpp"

namespace mwc {

/// Vertex measure of the multiplicative-weights loop; starts at 1 everywhere.
struct MeasureState {
  std::vector<double> mu;
  int t = 1;

  static MeasureState uniform(int n) { return {std::vector<double>(static_cast<std::size_t>(n), 1.0), 1}; }

  double total() const {
    double s = 0.0;
    for (double m : mu) s += m;
    return s;
  }
};

inline MeasureState halve_measure(MeasureState state, const VertexSet& s) {
  for (Vertex v : s.members()) state.mu[static_cast<std::size_t>(v - 1)] *= 0.5;
  ++state.t;
  return state;
}

struct CoverSet {
  VertexSet set;
  double cost = 0.0;
  int iteration = 0;
  int group = -1;                 // UTC call that produced the set (norm covering only)
  double measure_fraction = 0.0;  // mu_t(S_t) / mu_t(V)
};

struct Cover {
  std::vector<CoverSet> sets;
  std::vector<IsolatingCut> isolating;  // C_1..C_k (norm covering only)
  double measure_budget = 0.0;          // sum of measure fractions
  UtcBackend backend = UtcBackend::exact;
};

/// Measure-budget ceiling 4 ln n + 1.
inline double measure_budget_bound(int n) { return 4.0 * std::log(static_cast<double>(n)) + 1.0; }

/// Every vertex lies in at least this many cover sets once the loop stops.
inline int frequency_bound(int n) { return floor_log2(n) + 1; }

inline int covering_iteration_cap(int n, int k) {
  return static_cast<int>(std::ceil(64.0 * k * std::max(1.0, std::log2(static_cast<double>(n)))));
}

inline std::vector<int> cover_frequencies(const Cover& cover, int n) {
  std::vector<int> f(static_cast<std::size_t>(n), 0);
  for (const auto& s : cover.sets)
    for (Vertex v : s.set.members()) ++f[static_cast<std::size_t>(v - 1)];
  return f;
}

namespace detail {

inline void check_cover(const Cover& cover, const TerminalSet& terminals, int n) {
  for (const auto& s : cover.sets) require(terminals.count_in(s.set) <= 1, "cover set holds two terminals");
  const auto f = cover_frequencies(cover, n);
  require(*std::min_element(f.begin(), f.end()) >= frequency_bound(n), "a vertex is covered fewer than floor(log2 n)+1 times");
  require(cover.measure_budget <= measure_budget_bound(n) + 1e-9, "measure budget exceeds 4 ln n + 1");
}

}  // namespace detail

/// Candidate values of mu_t(P*) for the lp covering: 2^i mu_t(v), clamped to
/// mu_t(V), keeping only values more than 1.5x the previous kept one.
inline std::vector<double> measure_guess_grid(std::span<const double> mu, double total) {
  const int n = static_cast<int>(mu.size());
  std::vector<double> raw;
  for (double m : mu) {
    if (!(m > 0.0)) continue;
    for (int i = 0; i <= floor_log2(n); ++i) raw.push_back(std::min(std::ldexp(m, i), total));
  }
  std::sort(raw.begin(), raw.end());
  std::vector<double> grid;
  for (double a : raw)
    if (grid.empty() || a > 1.5 * grid.back()) grid.push_back(a);
  return grid;
}

/// Multiplicative-weights covering for lp objectives. Each iteration tries every
/// grid guess a with rho = max(1/2k, a/mu_t(V)) and keeps the cheapest UTC answer.
inline Cover cover_lp(const WeightedGraph& g, const TerminalSet& terminals, UtcBackend backend) {
  const int n = g.num_vertices();
  const int k = terminals.size();
  Cover cover;
  cover.backend = backend;
  MeasureState state = MeasureState::uniform(n);
  const int cap = covering_iteration_cap(n, k);
  while (state.total() >= 1.0 / n) {
    if (state.t > cap) throw InvariantViolation("covering exceeded its iteration cap");
    const double total = state.total();
    std::vector<double> rhos;
    for (double a : measure_guess_grid(state.mu, total)) rhos.push_back(std::max(1.0 / (2.0 * k), a / total));
    std::sort(rhos.begin(), rhos.end());
    rhos.erase(std::unique(rhos.begin(), rhos.end()), rhos.end());
    const auto answers = solve_utc_batch(backend, g, terminals, state.mu, rhos);
    const UtcSolution* best = nullptr;
    for (const auto& a : answers)
      if (a && (!best || detail::better(a->cost, a->measure, best->cost, best->measure))) best = &*a;
    if (!best) throw InfeasibleError("no UTC answer at rho = 1/2k");
    const double fraction = best->measure / total;
    detail::require(fraction + 1e-12 >= guaranteed_measure_factor(backend) / (2.0 * k), "UTC answer below the 1/2k measure floor");
    cover.sets.push_back({best->set, best->cost, state.t, -1, fraction});
    cover.measure_budget += fraction;
    state = halve_measure(std::move(state), best->set);
  }
  detail::check_cover(cover, terminals, n);
  if (backend == UtcBackend::exact)
    detail::require(static_cast<double>(cover.sets.size()) <= 2.0 * k * measure_budget_bound(n) + 1e-9, "cover has more than 2k(4 ln n + 1) sets");
  return cover;
}

/// Per-group UTC parameters for the norm covering: measure ratio rho_i and cost threshold.
struct GroupSpec {
  int group = 0;
  double rho = 0.0;
  double threshold = 0.0;
  int size = 0;  // |I_i| or bucket size, for the group-size bound
};

/// Shared core of the norm coverings. Groups are tried in order; the first whose
/// UTC answer costs at most alpha * threshold is taken. Empty result: some
/// iteration accepted nothing, so the guess was too low.
inline std::optional<Cover> cover_by_groups(const WeightedGraph& g, const TerminalSet& terminals, const std::vector<GroupSpec>& groups,
                                            double alpha, UtcBackend backend) {
  const int n = g.num_vertices();
  const int k = terminals.size();
  Cover cover;
  cover.backend = backend;
  cover.isolating = isolating_cuts(g, terminals);
  MeasureState state = MeasureState::uniform(n);
  const int cap = covering_iteration_cap(n, k);
  std::vector<double> rhos;
  for (const auto& gs : groups) rhos.push_back(gs.rho);
  while (state.total() >= 1.0 / n) {
    if (state.t > cap) throw InvariantViolation("covering exceeded its iteration cap");
    const double total = state.total();
    const auto answers = solve_utc_batch(backend, g, terminals, state.mu, rhos);
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < groups.size() && !pick; ++i)
      if (answers[i] && answers[i]->cost <= alpha * groups[i].threshold + kTolerance) pick = i;
    if (!pick) return std::nullopt;
    const UtcSolution& s = *answers[*pick];
    const double fraction = s.measure / total;
    cover.sets.push_back({s.set, s.cost, state.t, groups[*pick].group, fraction});
    cover.measure_budget += fraction;
    state = halve_measure(std::move(state), s.set);
  }
  detail::check_cover(cover, terminals, n);
  const double factor = guaranteed_measure_factor(backend);
  for (const auto& gs : groups) {
    const auto members = std::count_if(cover.sets.begin(), cover.sets.end(), [&](const CoverSet& c) { return c.group == gs.group; });
    detail::require(static_cast<double>(members) * gs.rho * factor <= measure_budget_bound(n) + 1e-9, "group larger than its measure budget allows");
  }
  return cover;
}

/// log2 k, floored at 1 so rho stays at most 1/2 when k = 2.
inline double log2_terminals(int k) { return std::max(1.0, std::log2(static_cast<double>(k))); }

/// Group parameters for the minimization-oracle covering: rho_i = 1/(2 log2 k |I_i|),
/// threshold r_i = guess / ‖1_{I_i}‖. Empty index sets are skipped.
inline std::vector<GroupSpec> norm_groups(const NormSpec& spec, const std::vector<CoordinateSet>& index_sets, double guess) {
  const int k = spec.dimension();
  std::vector<GroupSpec> out;
  for (std::size_t i = 0; i < index_sets.size(); ++i) {
    if (index_sets[i].empty()) continue;
    const double size = static_cast<double>(index_sets[i].size());
    const double ind = spec.indicator_norm(index_sets[i]);
    out.push_back({static_cast<int>(i), 1.0 / (2.0 * log2_terminals(k) * size), ind > 0.0 ? guess / ind : kInfinite,
                   static_cast<int>(index_sets[i].size())});
  }
  return out;
}

inline std::optional<Cover> cover_norm(const WeightedGraph& g, const TerminalSet& terminals, const NormSpec& spec, double guess,
                                       double alpha, UtcBackend backend) {
  if (!spec.has_minimization_oracle()) throw CapabilityError("norm covering needs a minimization oracle");
  if (spec.dimension() != terminals.size()) throw std::invalid_argument("norm dimension must equal the number of terminals");
  if (!(guess >= 0.0)) throw std::invalid_argument("OPT guess must be non-negative");
  return cover_by_groups(g, terminals, norm_groups(spec, compute_index_sets(spec), guess), alpha, backend);
}

/// Default cost multiplier on UTC thresholds: 1 for the exact backend,
/// 8 sqrt(log2 n log2 k) for the heuristic.
inline double default_alpha(UtcBackend backend, int n, int k) {
  if (backend == UtcBackend::exact) return 1.0;
  return 8.0 * std::sqrt(std::max(1.0, std::log2(static_cast<double>(n))) * log2_terminals(k));
}

/// Cut vector of the trivial partition: every non-terminal joins t_1.
inline CutVector trivial_cut_vector(const WeightedGraph& g, const TerminalSet& terminals) {
  std::vector<int> a(static_cast<std::size_t>(g.num_vertices()), 0);
  for (int i = 0; i < terminals.size(); ++i) a[static_cast<std::size_t>(terminals[static_cast<std::size_t>(i)] - 1)] = i;
  return cut_vector(g, a, terminals.size());
}

struct OptSearch {
  Cover cover;
  double guess = 0.0;
  double lower = 0.0;  // ‖(δ(C_1), ..., δ(C_k))‖
  double upper = 0.0;  // norm of the trivial partition
  int attempts = 0;
};

/// Smallest guess on the doubling ladder lo, 2 lo, 4 lo, ... for which the norm
/// covering succeeds. lo = 0 tries 0 first, then climbs from the smallest positive weight.
inline OptSearch binary_search_opt(const WeightedGraph& g, const TerminalSet& terminals, const NormSpec& spec, double alpha,
                                   UtcBackend backend) {
  OptSearch out;
  const auto cuts = isolating_cuts(g, terminals);
  CutVector c;
  for (const auto& cut : cuts) c.push_back(cut.cost);
  out.lower = spec.eval(c);
  out.upper = spec.eval(trivial_cut_vector(g, terminals));
  double guess = out.lower;
  if (!(guess > 0.0)) {
    ++out.attempts;
    if (auto cover = cover_norm(g, terminals, spec, 0.0, alpha, backend)) {
      out.cover = std::move(*cover);
      out.guess = 0.0;
      return out;
    }
    guess = min_positive_weight(g);
    if (!(guess > 0.0)) throw InfeasibleError("all weights are zero yet the covering failed at guess 0");
  }
  for (int step = 0; step < 256; ++step, guess *= 2.0) {
    ++out.attempts;
    if (auto cover = cover_norm(g, terminals, spec, guess, alpha, backend)) {
      out.cover = std::move(*cover);
      out.guess = guess;
      return out;
    }
  }
  throw InfeasibleError("no OPT guess let the norm covering finish");
}

}  // namespace mwc
