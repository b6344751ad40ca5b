#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "mwc/covering.hpp"
#include "mwc/graph.hpp"

namespace mwc {

/// One set Z_i of the uncrossing sequence and where it came from.
struct SequenceItem {
  const VertexSet* set = nullptr;
  int cover_index = -1;  // index into Cover::sets, or -1
  int isolating = -1;    // terminal index when Z_i is an isolating cut, or -1
  int group = -1;
};

struct UncrossedPart {
  VertexSet set;
  double cut = 0.0;         // δ(P'_i), effective weights
  double source_cut = 0.0;  // δ(Z_i), effective weights; 0 for the residual
  int position = -1;        // index in the sequence, -1 for the residual
  int cover_index = -1;
  int isolating = -1;
  int group = -1;
  bool residual = false;
};

/// Disjoint parts P'_1..P'_{m''-1} aligned with the sequence (possibly empty),
/// followed by the residual V minus the union of the sequence.
struct UncrossedPartition {
  std::vector<UncrossedPart> parts;
  int repair_iterations = 0;
  int iteration_cap = 0;
  std::vector<double> potential;  // Σ δ(P'_i) before the first and after every repair

  const UncrossedPart& residual() const { return parts.back(); }
};

/// δ(S) with infinite edges replaced by their finite stand-in.
inline double effective_boundary(const WeightedGraph& g, const VertexSet& s) {
  double total = 0.0;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edges()[e];
    if (s.contains(edge.u) != s.contains(edge.v)) total += g.effective_weight(e);
  }
  return total;
}

namespace detail {

inline std::vector<double> label_cuts(const WeightedGraph& g, const std::vector<int>& label, std::size_t parts) {
  std::vector<double> cut(parts, 0.0);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edges()[e];
    const int a = label[static_cast<std::size_t>(edge.u - 1)];
    const int b = label[static_cast<std::size_t>(edge.v - 1)];
    if (a == b) continue;
    const double w = g.effective_weight(e);
    if (a >= 0) cut[static_cast<std::size_t>(a)] += w;
    if (b >= 0) cut[static_cast<std::size_t>(b)] += w;
  }
  return cut;
}

inline double slack(double scale) { return 1e-9 * std::max(1.0, scale); }

}  // namespace detail

/// Prefix differences of the sequence, then repair: while some δ(P'_i) > 2 δ(Z_i),
/// reset P'_i = Z_i and remove Z_i from every other part (smallest such i first).
inline UncrossedPartition uncross_sequence(const WeightedGraph& g, const std::vector<SequenceItem>& seq) {
  const int n = g.num_vertices();
  const std::size_t s = seq.size();
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<Vertex>> members(s);
  std::vector<double> source_cut(s);
  for (std::size_t i = 0; i < s; ++i) {
    members[i] = seq[i].set->members();
    source_cut[i] = effective_boundary(g, *seq[i].set);
    for (Vertex v : members[i])
      if (label[static_cast<std::size_t>(v - 1)] < 0) label[static_cast<std::size_t>(v - 1)] = static_cast<int>(i);
  }

  UncrossedPartition out;
  auto cut = detail::label_cuts(g, label, s);
  double phi = std::accumulate(cut.begin(), cut.end(), 0.0);
  out.potential.push_back(phi);
  const double w_min = min_positive_weight(g);
  out.iteration_cap = w_min > 0.0 ? static_cast<int>(std::ceil(phi / w_min)) + 1 : 1;

  while (true) {
    std::size_t pick = s;
    for (std::size_t i = 0; i < s && pick == s; ++i)
      if (cut[i] > 2.0 * source_cut[i] + detail::slack(cut[i])) pick = i;
    if (pick == s) break;
    if (out.repair_iterations >= out.iteration_cap) throw InvariantViolation("uncrossing repair loop exceeded its potential-based cap");
    const double drop = 2.0 * (cut[pick] - source_cut[pick]);
    for (Vertex v : members[pick]) label[static_cast<std::size_t>(v - 1)] = static_cast<int>(pick);
    cut = detail::label_cuts(g, label, s);
    const double next = std::accumulate(cut.begin(), cut.end(), 0.0);
    detail::require(next <= phi - drop + detail::slack(phi), "repair step did not lower the potential by 2(δ(P'_i) - δ(Z_i))");
    detail::require(next < phi, "repair step did not strictly lower the potential");
    phi = next;
    out.potential.push_back(phi);
    ++out.repair_iterations;
  }

  out.parts.reserve(s + 1);
  for (std::size_t i = 0; i < s; ++i)
    out.parts.push_back({VertexSet(n), cut[i], source_cut[i], static_cast<int>(i), seq[i].cover_index, seq[i].isolating, seq[i].group, false});
  UncrossedPart residual{VertexSet(n), 0.0, 0.0, -1, -1, -1, -1, true};
  for (Vertex v = 1; v <= n; ++v) {
    const int l = label[static_cast<std::size_t>(v - 1)];
    if (l < 0)
      residual.set.insert(v);
    else
      out.parts[static_cast<std::size_t>(l)].set.insert(v);
  }
  residual.cut = effective_boundary(g, residual.set);
  out.parts.push_back(std::move(residual));
  return out;
}

/// Structural checks every uncrossing result must pass: a partition of V, at most
/// one terminal per part, each part inside its source with δ(P'_i) <= 2 δ(Z_i).
inline void check_uncrossed(const UncrossedPartition& up, const std::vector<SequenceItem>& seq, const TerminalSet& terminals, int n) {
  VertexSet seen(n);
  for (const auto& p : up.parts) {
    detail::require(!p.set.intersects(seen), "uncrossed parts overlap");
    seen |= p.set;
    detail::require(terminals.count_in(p.set) <= 1, "uncrossed part holds two terminals");
    if (p.residual) continue;
    detail::require(p.set.is_subset_of(*seq[static_cast<std::size_t>(p.position)].set), "uncrossed part escapes its source set");
    detail::require(p.cut <= 2.0 * p.source_cut + detail::slack(p.cut), "uncrossed part exceeds twice its source boundary");
  }
  detail::require(seen.size() == n, "uncrossed parts do not cover V");
  for (std::size_t i = 1; i < up.potential.size(); ++i) detail::require(up.potential[i] < up.potential[i - 1], "potential did not decrease");
}

inline int lp_sample_size(int k) { return static_cast<int>(std::ceil(12.0 * k * std::log(static_cast<double>(k)))); }

inline int norm_sample_size(int k) {
  const double l = std::log(static_cast<double>(k));
  return static_cast<int>(std::ceil(9.0 * k * l * l));
}

/// Uniform sample of `count` distinct indices from [0, m) in random order.
inline std::vector<int> sample_without_replacement(int m, int count, std::mt19937_64& rng) {
  std::vector<int> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(static_cast<std::size_t>(std::min(m, count)));
  return idx;
}

inline std::vector<SequenceItem> lp_sequence(const Cover& cover, int k, std::mt19937_64& rng) {
  if (cover.sets.empty()) throw std::invalid_argument("cannot uncross an empty cover");
  std::vector<SequenceItem> seq;
  for (int i : sample_without_replacement(static_cast<int>(cover.sets.size()), lp_sample_size(k), rng))
    seq.push_back({&cover.sets[static_cast<std::size_t>(i)].set, i, -1, cover.sets[static_cast<std::size_t>(i)].group});
  return seq;
}

/// C_1..C_k first, then a random sample of the cover in random order.
inline std::vector<SequenceItem> norm_sequence(const Cover& cover, int k, std::mt19937_64& rng) {
  if (static_cast<int>(cover.isolating.size()) != k) throw std::invalid_argument("norm uncrossing needs the k isolating cuts");
  std::vector<SequenceItem> seq;
  for (int i = 0; i < k; ++i) seq.push_back({&cover.isolating[static_cast<std::size_t>(i)].set, -1, i, -1});
  for (int i : sample_without_replacement(static_cast<int>(cover.sets.size()), norm_sample_size(k), rng))
    seq.push_back({&cover.sets[static_cast<std::size_t>(i)].set, i, -1, cover.sets[static_cast<std::size_t>(i)].group});
  return seq;
}

inline UncrossedPartition uncross_lp(const Cover& cover, const WeightedGraph& g, const TerminalSet& terminals, std::mt19937_64& rng) {
  const auto seq = lp_sequence(cover, terminals.size(), rng);
  auto up = uncross_sequence(g, seq);
  check_uncrossed(up, seq, terminals, g.num_vertices());
  return up;
}

inline UncrossedPartition uncross_norm(const Cover& cover, const WeightedGraph& g, const TerminalSet& terminals, std::mt19937_64& rng) {
  const auto seq = norm_sequence(cover, terminals.size(), rng);
  auto up = uncross_sequence(g, seq);
  check_uncrossed(up, seq, terminals, g.num_vertices());
  return up;
}

}  // namespace mwc
