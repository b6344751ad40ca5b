#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mwc/error.hpp"

namespace mwc {

/// Vertex identifier, 1-based (1..n) to match the instance file format.
using Vertex = int;

/// Marker for a weight that must never be cut (produced by weight preprocessing).
inline constexpr double kInfinite = std::numeric_limits<double>::infinity();

/// Absolute tolerance for every floating comparison in the library.
inline constexpr double kTolerance = 1e-9;

/// Subset of the vertex universe 1..n.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int universe) : bits_(static_cast<std::size_t>(universe), 0) {}

  static VertexSet of(int universe, std::initializer_list<Vertex> members) {
    VertexSet s(universe);
    for (Vertex v : members) s.insert(v);
    return s;
  }

  template <typename Range>
  static VertexSet from(int universe, const Range& members) {
    VertexSet s(universe);
    for (Vertex v : members) s.insert(v);
    return s;
  }

  static VertexSet full(int universe) {
    VertexSet s(universe);
    std::fill(s.bits_.begin(), s.bits_.end(), 1);
    s.count_ = universe;
    return s;
  }

  int universe() const noexcept { return static_cast<int>(bits_.size()); }
  int size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  bool contains(Vertex v) const { return bits_[index(v)] != 0; }

  void insert(Vertex v) {
    auto& b = bits_[index(v)];
    count_ += b == 0;
    b = 1;
  }

  void erase(Vertex v) {
    auto& b = bits_[index(v)];
    count_ -= b != 0;
    b = 0;
  }

  std::vector<Vertex> members() const {
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(count_));
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) out.push_back(static_cast<Vertex>(i + 1));
    return out;
  }

  bool intersects(const VertexSet& other) const {
    check_same(other);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i] && other.bits_[i]) return true;
    return false;
  }

  bool is_subset_of(const VertexSet& other) const {
    check_same(other);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i] && !other.bits_[i]) return false;
    return true;
  }

  VertexSet complement() const {
    VertexSet out(universe());
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] ? 0 : 1;
    out.count_ = universe() - count_;
    return out;
  }

  VertexSet& operator|=(const VertexSet& other) {
    check_same(other);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
    recount();
    return *this;
  }

  VertexSet& operator&=(const VertexSet& other) {
    check_same(other);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= other.bits_[i];
    recount();
    return *this;
  }

  VertexSet& operator-=(const VertexSet& other) {
    check_same(other);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (other.bits_[i]) bits_[i] = 0;
    recount();
    return *this;
  }

  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }
  friend bool operator==(const VertexSet& a, const VertexSet& b) { return a.bits_ == b.bits_; }

 private:
  std::size_t index(Vertex v) const {
    if (v < 1 || v > universe()) throw std::out_of_range("vertex " + std::to_string(v) + " outside 1.." + std::to_string(universe()));
    return static_cast<std::size_t>(v - 1);
  }

  void check_same(const VertexSet& other) const {
    if (other.universe() != universe()) throw std::invalid_argument("vertex sets over different universes");
  }

  void recount() { count_ = static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1})); }

  std::vector<std::uint8_t> bits_;
  int count_ = 0;
};

struct Edge {
  Vertex u;
  Vertex v;
  double w;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected graph with non-negative weights. Immutable after construction.
///
/// Edges keep their input order. A weight of `kInfinite` is allowed; algorithms
/// that need arithmetic on it use `effective_weight`, which maps it to one more
/// than the sum of all finite weights.
class WeightedGraph {
 public:
  struct Incidence {
    Vertex to;
    double w;  // effective weight
    std::size_t edge;
  };

  WeightedGraph() = default;

  WeightedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    std::set<std::pair<Vertex, Vertex>> seen;
    double finite_sum = 0.0;
    for (const Edge& e : edges_) {
      if (e.u < 1 || e.u > n || e.v < 1 || e.v > n)
        throw std::invalid_argument("edge endpoint outside 1.." + std::to_string(n));
      if (e.u == e.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
      if (std::isnan(e.w) || e.w < 0.0) throw std::invalid_argument("edge weight must be non-negative");
      if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second)
        throw std::invalid_argument("duplicate edge " + std::to_string(e.u) + "-" + std::to_string(e.v));
      if (std::isinf(e.w))
        has_infinite_ = true;
      else
        finite_sum += e.w;
    }
    big_ = finite_sum + 1.0;

    offsets_.assign(static_cast<std::size_t>(n) + 2, 0);
    for (const Edge& e : edges_) {
      ++offsets_[static_cast<std::size_t>(e.u) + 1];
      ++offsets_[static_cast<std::size_t>(e.v) + 1];
    }
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    adjacency_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    degree_.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      const double w = effective_weight(i);
      adjacency_[fill[static_cast<std::size_t>(e.u)]++] = {e.v, w, i};
      adjacency_[fill[static_cast<std::size_t>(e.v)]++] = {e.u, w, i};
      degree_[static_cast<std::size_t>(e.u)] += w;
      degree_[static_cast<std::size_t>(e.v)] += w;
    }
  }

  int num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool has_infinite() const noexcept { return has_infinite_; }

  /// Stand-in value used for `kInfinite` weights in arithmetic.
  double infinite_stand_in() const noexcept { return big_; }

  double effective_weight(std::size_t edge) const {
    const double w = edges_[edge].w;
    return std::isinf(w) ? big_ : w;
  }

  std::span<const Incidence> neighbors(Vertex v) const {
    const auto b = offsets_[static_cast<std::size_t>(v)];
    const auto e = offsets_[static_cast<std::size_t>(v) + 1];
    return {adjacency_.data() + b, e - b};
  }

  /// Sum of effective weights incident to v.
  double weighted_degree(Vertex v) const { return degree_[static_cast<std::size_t>(v)]; }

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> adjacency_;
  std::vector<double> degree_;
  double big_ = 1.0;
  bool has_infinite_ = false;
};

/// Ordered, distinct terminals t_1..t_k. Indices into the set are 0-based.
class TerminalSet {
 public:
  TerminalSet() = default;

  TerminalSet(std::vector<Vertex> terminals, int n) : terminals_(std::move(terminals)), index_(static_cast<std::size_t>(n) + 1, -1) {
    if (terminals_.size() < 2) throw std::invalid_argument("at least two terminals are required");
    for (std::size_t i = 0; i < terminals_.size(); ++i) {
      const Vertex t = terminals_[i];
      if (t < 1 || t > n) throw std::invalid_argument("terminal " + std::to_string(t) + " outside 1.." + std::to_string(n));
      if (index_[static_cast<std::size_t>(t)] != -1) throw std::invalid_argument("duplicate terminal " + std::to_string(t));
      index_[static_cast<std::size_t>(t)] = static_cast<int>(i);
    }
  }

  int size() const noexcept { return static_cast<int>(terminals_.size()); }
  Vertex operator[](std::size_t i) const { return terminals_.at(i); }
  const std::vector<Vertex>& vertices() const noexcept { return terminals_; }
  auto begin() const noexcept { return terminals_.begin(); }
  auto end() const noexcept { return terminals_.end(); }

  bool is_terminal(Vertex v) const { return index_of(v) >= 0; }

  /// Position of v among the terminals, or -1.
  int index_of(Vertex v) const {
    if (v < 1 || static_cast<std::size_t>(v) >= index_.size()) return -1;
    return index_[static_cast<std::size_t>(v)];
  }

  int count_in(const VertexSet& s) const {
    int c = 0;
    for (Vertex t : terminals_) c += s.contains(t) ? 1 : 0;
    return c;
  }

  friend bool operator==(const TerminalSet& a, const TerminalSet& b) { return a.terminals_ == b.terminals_; }

 private:
  std::vector<Vertex> terminals_;
  std::vector<int> index_;
};

/// A graph together with its terminals: one Multiway Cut instance.
struct Instance {
  WeightedGraph graph;
  TerminalSet terminals;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Edge-boundary weights (δ(P_1), ..., δ(P_k)).
using CutVector = std::vector<double>;

/// Disjoint family of vertex sets. When `labels` is non-empty, part i is the
/// part of terminal `labels[i]`.
struct Partition {
  std::vector<VertexSet> parts;
  std::vector<Vertex> labels;

  bool is_disjoint() const {
    if (parts.empty()) return true;
    VertexSet seen(parts.front().universe());
    for (const auto& p : parts) {
      if (p.intersects(seen)) return false;
      seen |= p;
    }
    return true;
  }

  bool covers(int n) const {
    VertexSet all(n);
    for (const auto& p : parts) all |= p;
    return all.size() == n;
  }

  /// Complete, disjoint, and exactly one terminal per part matching its label.
  bool is_terminal_labeled(const TerminalSet& terminals) const {
    if (parts.size() != static_cast<std::size_t>(terminals.size()) || labels.size() != parts.size()) return false;
    if (!is_disjoint() || parts.empty() || !covers(parts.front().universe())) return false;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (terminals.count_in(parts[i]) != 1 || !parts[i].contains(labels[i])) return false;
      if (labels[i] != terminals[i]) return false;
    }
    return true;
  }
};

/// Builds a terminal-labeled partition from a per-vertex part index
/// (`assignment[v-1]` in 0..k-1, part i belonging to terminal i).
inline Partition partition_from_assignment(const TerminalSet& terminals, std::span<const int> assignment) {
  const int n = static_cast<int>(assignment.size());
  Partition p;
  p.parts.assign(static_cast<std::size_t>(terminals.size()), VertexSet(n));
  p.labels = terminals.vertices();
  for (int v = 1; v <= n; ++v) {
    const int part = assignment[static_cast<std::size_t>(v - 1)];
    if (part < 0 || part >= terminals.size()) throw std::invalid_argument("assignment out of range");
    p.parts[static_cast<std::size_t>(part)].insert(v);
  }
  return p;
}

/// Per-vertex part index of a partition (-1 for uncovered vertices).
inline std::vector<int> assignment_of(const Partition& p, int n) {
  std::vector<int> a(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < p.parts.size(); ++i)
    for (Vertex v : p.parts[i].members()) a[static_cast<std::size_t>(v - 1)] = static_cast<int>(i);
  return a;
}

/// δ(S): total weight of edges with exactly one endpoint in S.
/// Returns `kInfinite` when an infinite edge crosses.
inline double boundary_weight(const WeightedGraph& g, const VertexSet& s) {
  if (s.universe() != g.num_vertices()) throw std::invalid_argument("vertex set universe does not match graph");
  double total = 0.0;
  for (const Edge& e : g.edges())
    if (s.contains(e.u) != s.contains(e.v)) total += e.w;
  return total;
}

/// δ(A, B): total weight of edges between disjoint A and B.
inline double cross_weight(const WeightedGraph& g, const VertexSet& a, const VertexSet& b) {
  if (a.intersects(b)) throw std::invalid_argument("cross_weight requires disjoint sets");
  double total = 0.0;
  for (const Edge& e : g.edges())
    if ((a.contains(e.u) && b.contains(e.v)) || (a.contains(e.v) && b.contains(e.u))) total += e.w;
  return total;
}

inline CutVector cut_vector(const WeightedGraph& g, const Partition& p) {
  CutVector out;
  out.reserve(p.parts.size());
  for (const auto& part : p.parts) out.push_back(boundary_weight(g, part));
  return out;
}

/// Cut vector of the labeled partition given by a per-vertex assignment, in one pass over edges.
inline CutVector cut_vector(const WeightedGraph& g, std::span<const int> assignment, int parts) {
  CutVector out(static_cast<std::size_t>(parts), 0.0);
  for (const Edge& e : g.edges()) {
    const int a = assignment[static_cast<std::size_t>(e.u - 1)];
    const int b = assignment[static_cast<std::size_t>(e.v - 1)];
    if (a == b) continue;
    if (a >= 0) out[static_cast<std::size_t>(a)] += e.w;
    if (b >= 0) out[static_cast<std::size_t>(b)] += e.w;
  }
  return out;
}

/// Sorted distinct positive finite weights: the candidate values for the
/// largest weight cut by an optimal solution.
inline std::vector<double> guess_weight_scales(const WeightedGraph& g) {
  std::vector<double> out;
  for (const Edge& e : g.edges())
    if (e.w > 0.0 && std::isfinite(e.w)) out.push_back(e.w);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) <= kTolerance; }), out.end());
  return out;
}

/// Weight truncation around a guessed scale W: weights below eps*W/n^2 become
/// zero, weights strictly above W become infinite, the rest are unchanged.
inline WeightedGraph preprocess_weights(const WeightedGraph& g, double scale, double eps) {
  if (!(scale > 0.0)) throw std::invalid_argument("weight scale must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  const double n = g.num_vertices();
  const double floor = eps * scale / (n * n);
  std::vector<Edge> edges = g.edges();
  for (Edge& e : edges) {
    if (e.w > scale)
      e.w = kInfinite;
    else if (e.w < floor)
      e.w = 0.0;
  }
  return WeightedGraph(g.num_vertices(), std::move(edges));
}

/// Ratio of the largest finite weight to the smallest positive one (0 when no positive weight).
inline double weight_ratio(const WeightedGraph& g) {
  double lo = kInfinite, hi = 0.0;
  for (const Edge& e : g.edges()) {
    if (!(e.w > 0.0)) continue;
    lo = std::min(lo, e.w);
    if (std::isfinite(e.w)) hi = std::max(hi, e.w);
  }
  return hi > 0.0 ? hi / lo : 0.0;
}

/// Smallest positive effective weight, or 0 when every weight is zero.
inline double min_positive_weight(const WeightedGraph& g) {
  double lo = kInfinite;
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const double w = g.effective_weight(i);
    if (w > 0.0) lo = std::min(lo, w);
  }
  return std::isinf(lo) ? 0.0 : lo;
}

}  // namespace mwc
