#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "mwc/graph.hpp"

namespace mwc {

// Dinic's algorithm on double capacities. Nodes are 0-based.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes) : head_(static_cast<std::size_t>(nodes), -1) {}

  // Undirected edge: capacity c in both directions.
  void add_undirected(int a, int b, double c) { add_arc(a, b, c, c); }
  void add_directed(int a, int b, double c) { add_arc(a, b, c, 0.0); }

  double run(int s, int t) {
    double flow = 0.0;
    while (bfs(s, t)) {
      iter_ = head_;
      for (double f; (f = dfs(s, t, std::numeric_limits<double>::infinity())) > 0.0;) flow += f;
    }
    return flow;
  }

  // Nodes reachable from s in the residual graph after run(): the minimal source side.
  std::vector<char> source_side(int s) const {
    std::vector<char> seen(head_.size(), 0);
    std::vector<int> stack{s};
    seen[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int a = head_[static_cast<std::size_t>(u)]; a != -1; a = arcs_[static_cast<std::size_t>(a)].next) {
        const Arc& arc = arcs_[static_cast<std::size_t>(a)];
        if (arc.cap > residual_eps(arc) && !seen[static_cast<std::size_t>(arc.to)]) {
          seen[static_cast<std::size_t>(arc.to)] = 1;
          stack.push_back(arc.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    int to;
    int next;
    double cap;
    double original;
  };

  // Relative slack so float round-off does not leave phantom residual capacity.
  static double residual_eps(const Arc& a) { return 1e-12 * std::max(1.0, a.original); }

  void add_arc(int a, int b, double forward, double backward) {
    arcs_.push_back({b, head_[static_cast<std::size_t>(a)], forward, forward});
    head_[static_cast<std::size_t>(a)] = static_cast<int>(arcs_.size()) - 1;
    arcs_.push_back({a, head_[static_cast<std::size_t>(b)], backward, std::max(forward, backward)});
    head_[static_cast<std::size_t>(b)] = static_cast<int>(arcs_.size()) - 1;
  }

  bool bfs(int s, int t) {
    level_.assign(head_.size(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int a = head_[static_cast<std::size_t>(u)]; a != -1; a = arcs_[static_cast<std::size_t>(a)].next) {
        const Arc& arc = arcs_[static_cast<std::size_t>(a)];
        if (arc.cap > residual_eps(arc) && level_[static_cast<std::size_t>(arc.to)] < 0) {
          level_[static_cast<std::size_t>(arc.to)] = level_[static_cast<std::size_t>(u)] + 1;
          q.push(arc.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  double dfs(int u, int t, double pushed) {
    if (u == t) return pushed;
    for (int& a = iter_[static_cast<std::size_t>(u)]; a != -1; a = arcs_[static_cast<std::size_t>(a)].next) {
      Arc& arc = arcs_[static_cast<std::size_t>(a)];
      if (arc.cap <= residual_eps(arc) || level_[static_cast<std::size_t>(arc.to)] != level_[static_cast<std::size_t>(u)] + 1) continue;
      const double got = dfs(arc.to, t, std::min(pushed, arc.cap));
      if (got > 0.0) {
        arc.cap -= got;
        arcs_[static_cast<std::size_t>(a ^ 1)].cap += got;
        return got;
      }
    }
    return 0.0;
  }

  std::vector<Arc> arcs_;
  std::vector<int> head_;
  std::vector<int> iter_;
  std::vector<int> level_;
};

struct IsolatingCut {
  VertexSet set;
  double cost = 0.0;
};

/// Minimum cut separating terminal i (0-based) from all other terminals.
/// The set is the minimal source side, so cuts for different terminals are disjoint.
inline IsolatingCut min_isolating_cut(const WeightedGraph& g, const TerminalSet& terminals, int i) {
  if (i < 0 || i >= terminals.size()) throw std::out_of_range("terminal index out of range");
  const int n = g.num_vertices();
  const int sink = n + 1;
  MaxFlow flow(n + 2);
  double total = 0.0;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edges()[e];
    const double w = g.effective_weight(e);
    total += w;
    if (w > 0.0) flow.add_undirected(edge.u, edge.v, w);
  }
  const double tie = 2.0 * total + 1.0;
  for (int j = 0; j < terminals.size(); ++j)
    if (j != i) flow.add_directed(terminals[static_cast<std::size_t>(j)], sink, tie);
  const Vertex source = terminals[static_cast<std::size_t>(i)];
  flow.run(source, sink);
  const auto side = flow.source_side(source);
  IsolatingCut out{VertexSet(n), 0.0};
  for (Vertex v = 1; v <= n; ++v)
    if (side[static_cast<std::size_t>(v)]) out.set.insert(v);
  detail::require(terminals.count_in(out.set) == 1, "isolating cut must hold exactly its own terminal");
  out.cost = boundary_weight(g, out.set);
  return out;
}

inline std::vector<IsolatingCut> isolating_cuts(const WeightedGraph& g, const TerminalSet& terminals) {
  std::vector<IsolatingCut> out;
  out.reserve(static_cast<std::size_t>(terminals.size()));
  for (int i = 0; i < terminals.size(); ++i) out.push_back(min_isolating_cut(g, terminals, i));
  return out;
}

}  // namespace mwc
