#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "mwc/bipartite.hpp"
#include "mwc/exact_oracle.hpp"
#include "mwc/graph.hpp"
#include "mwc/norms.hpp"

namespace mwc {

/// Complete bipartite H = (L, B, L x B) with unit weights. Vertices 1..k are the
/// terminals L, vertices k+1..k+t are B; the norm sums max_{i in N(v)} |x_i| over R.
struct ReducedInstance {
  WeightedGraph graph;
  TerminalSet terminals;
  NormSpec norm;
  int k = 0;
  int t = 0;
  int right = 0;  // n_R
};

inline ReducedInstance build_reduction(const SsbveInstance& inst) {
  inst.validate();
  const int k = inst.k();
  const int t = inst.t;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(k) * static_cast<std::size_t>(t));
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= t; ++j) edges.push_back({i, k + j, 1.0});
  std::vector<Vertex> l(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) l[static_cast<std::size_t>(i)] = i + 1;
  return {WeightedGraph(k + t, std::move(edges)), TerminalSet(std::move(l), k + t), NormSpec::neighborhood_max(k, inst.graph.right), k, t,
          inst.graph.right_size()};
}

/// y_i = |P_i| - 1, the number of B vertices placed with terminal i.
inline std::vector<double> y_from_partition(const Partition& part, const ReducedInstance& red) {
  if (!part.covers(red.k + red.t) || !part.is_terminal_labeled(red.terminals))
    throw std::invalid_argument("partition of H must be terminal-labeled and cover every vertex");
  std::vector<double> y;
  for (const auto& p : part.parts) y.push_back(static_cast<double>(p.size() - 1));
  return y;
}

struct SandwichReport {
  double cost = 0.0;    // c = ‖(δ(P_1), ..., δ(P_k))‖
  double norm_y = 0.0;  // ‖y‖
  double lower = 0.0;   // (k-2) ‖y‖
  double upper = 0.0;   // (k-2) ‖y‖ + t n_R
  std::vector<double> y;
  CutVector cuts;
  bool per_coordinate = true;  // δ(P_i) = (k-2) y_i + t for every i
  bool holds = false;
};

inline constexpr double kSandwichTolerance = 1e-6;

inline SandwichReport verify_sandwich(const Partition& part, const ReducedInstance& red) {
  if (red.k < 2) throw std::invalid_argument("the sandwich needs k >= 2");
  SandwichReport r;
  r.y = y_from_partition(part, red);
  r.cuts = cut_vector(red.graph, part);
  r.cost = red.norm.eval(r.cuts);
  r.norm_y = red.norm.eval(r.y);
  r.lower = (red.k - 2) * r.norm_y;
  r.upper = r.lower + static_cast<double>(red.t) * red.right;
  for (std::size_t i = 0; i < r.y.size(); ++i)
    if (r.cuts[i] != (red.k - 2) * r.y[i] + red.t) r.per_coordinate = false;
  r.holds = r.per_coordinate && r.lower <= r.cost + kSandwichTolerance && r.cost <= r.upper + kSandwichTolerance;
  return r;
}

/// Q_j = {i : 2^j <= y_i < 2^{j+1}} for the smallest j with |Q_j| >= 2^{-(j+1)} t / ℓ, ℓ = ⌊log2 t⌋ + 1.
struct GroupChoice {
  int j = 0;
  int levels = 0;  // ℓ
  std::vector<int> set;
};

inline GroupChoice select_group(const std::vector<double>& y, int t) {
  if (t < 1) throw std::invalid_argument("t must be positive");
  GroupChoice out;
  out.levels = floor_log2(t) + 1;
  for (int j = 0; j < out.levels; ++j) {
    std::vector<int> q;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] >= std::ldexp(1.0, j) && y[i] < std::ldexp(1.0, j + 1)) q.push_back(static_cast<int>(i));
    if (!q.empty() && static_cast<double>(q.size()) >= std::ldexp(static_cast<double>(t) / out.levels, -(j + 1))) {
      out.j = j;
      out.set = std::move(q);
      return out;
    }
  }
  throw InvariantViolation("no group Q_j reaches 2^{-(j+1)} t / l; y does not sum to t");
}

/// Any Norm Multiway Cut solver; it must return a terminal-labeled partition.
using MultiwaySolver = std::function<Partition(const WeightedGraph&, const TerminalSet&, const NormSpec&)>;

inline MultiwaySolver brute_force_solver(OracleBudget budget = {}) {
  return [budget](const WeightedGraph& g, const TerminalSet& t, const NormSpec& n) { return brute_force_multiway(g, t, n, budget).partition; };
}

struct Extraction {
  std::vector<int> set;  // left indices, ascending
  int j = 0;
  double norm_y = 0.0;
  int neighborhood = 0;  // |N(S')|
  bool exhaustive = false;
};

/// One round of small-set extraction. k <= 3 is solved exactly.
inline Extraction extract_small_set(const SsbveInstance& inst, const MultiwaySolver& solver) {
  inst.validate();
  Extraction out;
  if (inst.k() <= 3) {
    auto best = brute_force_ssbve(inst.graph, inst.t);
    out.set = std::move(best.set);
    out.neighborhood = best.value;
    out.exhaustive = true;
    return out;
  }
  const auto red = build_reduction(inst);
  const auto y = y_from_partition(solver(red.graph, red.terminals, red.norm), red);
  auto choice = select_group(y, inst.t);
  out.set = std::move(choice.set);
  out.j = choice.j;
  out.norm_y = red.norm.eval(y);
  out.neighborhood = inst.graph.neighborhood_size(out.set);
  detail::require(static_cast<int>(out.set.size()) <= inst.t, "extracted set is larger than t");
  detail::require(out.neighborhood <= std::ldexp(out.norm_y, -out.j) + kSandwichTolerance, "|N(Q_j)| exceeds 2^{-j} ‖y‖");
  return out;
}

struct IteratedExtraction {
  std::vector<int> set;  // exactly t left indices, ascending
  int neighborhood = 0;
  std::vector<Extraction> rounds;  // indices relative to each round's residual instance
};

/// Extracts from L minus everything taken so far with t_j = t - |taken| until t
/// vertices are collected, then keeps the lexicographically least t of them.
inline IteratedExtraction iterate_extraction(const SsbveInstance& inst, const MultiwaySolver& solver) {
  inst.validate();
  IteratedExtraction out;
  std::vector<int> remaining(static_cast<std::size_t>(inst.k()));
  for (int i = 0; i < inst.k(); ++i) remaining[static_cast<std::size_t>(i)] = i;
  std::vector<int> taken;
  while (static_cast<int>(taken.size()) < inst.t) {
    const int need = inst.t - static_cast<int>(taken.size());
    if (remaining.size() < 2) {
      taken.insert(taken.end(), remaining.begin(), remaining.end());
      remaining.clear();
      break;
    }
    std::vector<int> local(static_cast<std::size_t>(inst.k()), -1);
    for (std::size_t i = 0; i < remaining.size(); ++i) local[static_cast<std::size_t>(remaining[i])] = static_cast<int>(i);
    SsbveInstance sub{{static_cast<int>(remaining.size()), {}}, need};
    for (const auto& nb : inst.graph.right) {
      std::vector<int> kept;
      for (int i : nb)
        if (local[static_cast<std::size_t>(i)] >= 0) kept.push_back(local[static_cast<std::size_t>(i)]);
      sub.graph.right.push_back(std::move(kept));
    }
    auto round = extract_small_set(sub, solver);
    detail::require(!round.set.empty(), "extraction round removed no vertex");
    std::vector<char> drop(remaining.size(), 0);
    for (int i : round.set) {
      taken.push_back(remaining[static_cast<std::size_t>(i)]);
      drop[static_cast<std::size_t>(i)] = 1;
    }
    std::vector<int> next;
    for (std::size_t i = 0; i < remaining.size(); ++i)
      if (!drop[i]) next.push_back(remaining[i]);
    remaining = std::move(next);
    out.rounds.push_back(std::move(round));
  }
  std::sort(taken.begin(), taken.end());
  detail::require(static_cast<int>(taken.size()) >= inst.t, "extraction collected fewer than t vertices");
  taken.resize(static_cast<std::size_t>(inst.t));
  out.set = std::move(taken);
  out.neighborhood = inst.graph.neighborhood_size(out.set);
  return out;
}

}  // namespace mwc
