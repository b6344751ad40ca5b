#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "mwc/graph.hpp"
#include "mwc/norms.hpp"
#include "mwc/uncrossing.hpp"

namespace mwc {

/// Round-robin bookkeeping: q[j] is δ(Q_j) in descending order; bucket i holds j ≡ i (mod k).
struct BucketReport {
  std::vector<double> q;
  std::vector<double> tail;  // Σ_{j >= k, j ≡ i} δ(Q_j)
  double average = 0.0;      // (1/k) Σ_j δ(Q_j)
};

struct Aggregation {
  Partition partition;
  CutVector cuts;  // true weights
  std::vector<int> assignment;
  BucketReport buckets;
};

namespace detail {

inline Aggregation finish(const WeightedGraph& g, const TerminalSet& terminals, std::vector<int> assignment) {
  Aggregation out;
  out.partition = partition_from_assignment(terminals, assignment);
  require(out.partition.is_terminal_labeled(terminals), "aggregated partition is not terminal-labeled");
  out.cuts = cut_vector(g, assignment, terminals.size());
  out.assignment = std::move(assignment);
  return out;
}

inline void assign(std::vector<int>& assignment, const VertexSet& s, int part) {
  for (Vertex v : s.members()) assignment[static_cast<std::size_t>(v - 1)] = part;
}

// Indices of parts sorted by cut descending, ties by position in the input.
inline std::vector<std::size_t> by_cut_descending(const UncrossedPartition& up, const std::vector<std::size_t>& which) {
  std::vector<std::size_t> out = which;
  std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) { return up.parts[a].cut > up.parts[b].cut; });
  return out;
}

}  // namespace detail

/// Terminal parts seed P_1..P_k; the rest, residual included, are sorted by δ
/// descending and dealt round-robin. Empty when a terminal is uncovered.
inline std::optional<Aggregation> aggregate_lp(const UncrossedPartition& up, const WeightedGraph& g, const TerminalSet& terminals) {
  const int n = g.num_vertices();
  const int k = terminals.size();
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  std::vector<std::size_t> rest;
  std::vector<char> seeded(static_cast<std::size_t>(k), 0);
  for (std::size_t p = 0; p < up.parts.size(); ++p) {
    const auto& part = up.parts[p];
    if (part.set.empty()) continue;
    int owner = -1;
    for (Vertex t : terminals)
      if (part.set.contains(t)) owner = terminals.index_of(t);
    if (owner < 0) {
      rest.push_back(p);
      continue;
    }
    if (part.residual) return std::nullopt;
    seeded[static_cast<std::size_t>(owner)] = 1;
    detail::assign(assignment, part.set, owner);
  }
  if (std::find(seeded.begin(), seeded.end(), 0) != seeded.end()) return std::nullopt;

  BucketReport report;
  report.tail.assign(static_cast<std::size_t>(k), 0.0);
  const auto order = detail::by_cut_descending(up, rest);
  double total = 0.0;
  for (std::size_t j = 0; j < order.size(); ++j) {
    const auto& part = up.parts[order[j]];
    const int bucket = static_cast<int>(j % static_cast<std::size_t>(k));
    detail::assign(assignment, part.set, bucket);
    report.q.push_back(part.cut);
    total += part.cut;
    if (j >= static_cast<std::size_t>(k)) report.tail[static_cast<std::size_t>(bucket)] += part.cut;
  }
  report.average = total / k;
  for (double t : report.tail) detail::require(t <= report.average + detail::slack(report.average), "round-robin bucket tail exceeds the average");

  auto out = detail::finish(g, terminals, std::move(assignment));
  out.buckets = std::move(report);
  return out;
}

/// Shared aggregation for the norm variants. `slots[i]` lists the coordinates
/// (ascending, repeats allowed) that receive group i's subgroups; the residual
/// joins coordinate `residual_to`. Parts that still hold a terminal go to it.
inline Aggregation aggregate_by_slots(const UncrossedPartition& up, const WeightedGraph& g, const TerminalSet& terminals,
                                      const std::vector<std::vector<int>>& slots, int residual_to) {
  const int n = g.num_vertices();
  const int k = terminals.size();
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<std::size_t>> groups(slots.size());
  for (std::size_t p = 0; p < up.parts.size(); ++p) {
    const auto& part = up.parts[p];
    if (part.set.empty()) continue;
    int owner = -1;
    for (Vertex t : terminals)
      if (part.set.contains(t)) owner = terminals.index_of(t);
    if (part.residual) {
      detail::require(owner < 0, "residual part holds a terminal");
      detail::assign(assignment, part.set, residual_to);
    } else if (owner >= 0) {
      detail::assign(assignment, part.set, owner);
    } else if (part.isolating >= 0) {
      detail::assign(assignment, part.set, part.isolating);
    } else {
      detail::require(part.group >= 0 && static_cast<std::size_t>(part.group) < slots.size(), "part without a known group");
      groups[static_cast<std::size_t>(part.group)].push_back(p);
    }
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].empty()) continue;
    const auto& coords = slots[i];
    detail::require(!coords.empty(), "group has parts but no coordinates");
    const auto order = detail::by_cut_descending(up, groups[i]);
    for (std::size_t j = 0; j < order.size(); ++j) {
      const int coord = coords[j % coords.size()];
      detail::require(coord >= 0 && coord < k, "coordinate out of range");
      detail::assign(assignment, up.parts[order[j]].set, coord);
    }
  }
  return detail::finish(g, terminals, std::move(assignment));
}

/// Index of the group whose threshold r_i is largest (ties: smallest i), among non-empty I_i.
inline int largest_threshold_group(const std::vector<CoordinateSet>& index_sets, const std::vector<double>& r) {
  int best = -1;
  for (std::size_t i = 0; i < index_sets.size(); ++i)
    if (!index_sets[i].empty() && (best < 0 || r[i] > r[static_cast<std::size_t>(best)])) best = static_cast<int>(i);
  detail::require(best >= 0, "no non-empty index set");
  return best;
}

/// Group i is split into |I_i| near-equal subgroups dealt by δ descending, one per
/// coordinate of I_i; the residual goes to the smallest coordinate of the group
/// with the largest r_i.
inline Aggregation aggregate_norm_min(const UncrossedPartition& up, const WeightedGraph& g, const TerminalSet& terminals,
                                      const std::vector<CoordinateSet>& index_sets, const std::vector<double>& r) {
  const int star = largest_threshold_group(index_sets, r);
  return aggregate_by_slots(up, g, terminals, index_sets, index_sets[static_cast<std::size_t>(star)].front());
}

/// Coordinates for the ordering-oracle aggregation: slots[i] is the multiset I'_i
/// of size 2^i, and `first` the coordinate that received b_0.
struct OrderingAssignment {
  std::vector<std::vector<int>> slots;
  int first = 0;
  double assembled = 0.0;  // ‖Σ_i b_i Σ_{j in I'_i} 1_j‖
  double bound = 0.0;      // 3 ‖spread vector‖ in its best ordering
};

/// Places b_0 once and every b_i (i >= 1) 2^i times via the ordering oracle, and
/// checks the assembled vector against three times the norm of the spread vector
/// whose entries at ranks 2^i .. 2^{i+1}-1 equal b_i.
inline OrderingAssignment ordering_assignment(const NormSpec& spec, const std::vector<double>& b) {
  if (!spec.has_ordering_oracle()) throw CapabilityError("ordering assignment needs an ordering oracle");
  const int k = spec.dimension();
  const int levels = floor_log2(k);
  if (static_cast<int>(b.size()) != levels + 1) throw std::invalid_argument("b must have floor(log2 k) + 1 entries");
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(b[i] >= 0.0)) throw std::invalid_argument("b entries must be non-negative");
    if (i > 0 && b[i] > b[i - 1] + kTolerance) throw std::invalid_argument("b must be non-increasing");
  }
  OrderingAssignment out;
  out.slots.assign(b.size(), {});

  std::vector<double> u1(static_cast<std::size_t>(k), 0.0);
  u1[0] = b[0];
  const auto pi1 = spec.ordering_oracle(u1);
  for (int j = 0; j < k; ++j)
    if (pi1[static_cast<std::size_t>(j)] == 0) out.first = j;
  out.slots[0].push_back(out.first);

  std::vector<double> u2(static_cast<std::size_t>(k), 0.0);
  std::vector<int> tag(static_cast<std::size_t>(k), -1);
  std::size_t pos = 0;
  for (int i = 1; i <= levels; ++i)
    for (int c = 0; c < (1 << (i - 1)); ++c, ++pos) {
      u2[pos] = b[static_cast<std::size_t>(i)];
      tag[pos] = i;
    }
  const auto pi2 = spec.ordering_oracle(u2);
  for (int j = 0; j < k; ++j) {
    const int i = tag[static_cast<std::size_t>(pi2[static_cast<std::size_t>(j)])];
    if (i < 1) continue;
    // u_2 and u_3 are the same vector, so each coordinate carries two copies.
    out.slots[static_cast<std::size_t>(i)].push_back(j);
    out.slots[static_cast<std::size_t>(i)].push_back(j);
  }
  for (auto& s : out.slots) std::sort(s.begin(), s.end());

  std::vector<double> assembled(static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i)
    for (int j : out.slots[i]) assembled[static_cast<std::size_t>(j)] += b[i];
  out.assembled = spec.eval(assembled);

  std::vector<double> spread(static_cast<std::size_t>(k), 0.0);
  for (int rank = 1; rank <= k; ++rank) spread[static_cast<std::size_t>(rank - 1)] = b[static_cast<std::size_t>(floor_log2(rank))];
  out.bound = 3.0 * spec.eval(apply_ordering(spread, spec.ordering_oracle(spread)));
  detail::require(out.assembled <= out.bound + detail::slack(out.bound), "ordering assignment exceeds three times the spread norm");
  return out;
}

/// All non-increasing sequences of length ⌊log2 k⌋+1 over {r_max / 2^j : j <= ⌊log2 k⌋} ∪ {0}.
inline std::vector<std::vector<double>> enumerate_b_sequences(double r_max, int k) {
  if (!(r_max >= 0.0)) throw std::invalid_argument("r_max must be non-negative");
  if (k < 1) throw std::invalid_argument("k must be positive");
  const int levels = floor_log2(k);
  const std::size_t len = static_cast<std::size_t>(levels) + 1;
  if (r_max == 0.0) return {std::vector<double>(len, 0.0)};
  std::vector<double> values;  // descending
  for (int j = 0; j <= levels; ++j) values.push_back(std::ldexp(r_max, -j));
  values.push_back(0.0);
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> idx(len, 0);
  while (true) {
    std::vector<double> seq;
    for (std::size_t i : idx) seq.push_back(values[i]);
    out.push_back(std::move(seq));
    std::size_t p = len;
    while (p > 0 && idx[p - 1] == values.size() - 1) --p;
    if (p == 0) break;
    ++idx[p - 1];
    for (std::size_t q = p; q < len; ++q) idx[q] = idx[p - 1];
  }
  return out;
}

}  // namespace mwc
