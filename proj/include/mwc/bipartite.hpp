#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace mwc {

/// Bipartite graph (L, R, E): left vertices 0..left-1, one neighborhood per right vertex.
struct Bipartite {
  int left = 0;
  std::vector<std::vector<int>> right;

  int right_size() const { return static_cast<int>(right.size()); }

  void validate() const {
    if (left < 1) throw std::invalid_argument("bipartite graph needs at least one left vertex");
    for (const auto& nb : right)
      for (int i : nb)
        if (i < 0 || i >= left) throw std::invalid_argument("neighbor index outside the left side");
  }

  /// |N(S)| for S given as left indices.
  int neighborhood_size(const std::vector<int>& s) const {
    std::vector<char> in(static_cast<std::size_t>(left), 0);
    for (int i : s) in[static_cast<std::size_t>(i)] = 1;
    int count = 0;
    for (const auto& nb : right)
      count += std::any_of(nb.begin(), nb.end(), [&](int i) { return in[static_cast<std::size_t>(i)] != 0; }) ? 1 : 0;
    return count;
  }
};

/// Small Set Bipartite Vertex Expansion: choose t left vertices minimizing |N(S)|.
struct SsbveInstance {
  Bipartite graph;
  int t = 1;

  int k() const { return graph.left; }

  void validate() const {
    graph.validate();
    if (graph.left < 2) throw std::invalid_argument("SSBVE needs at least two left vertices");
    if (t < 1 || t > graph.left) throw std::invalid_argument("t must lie in 1..|L|");
  }
};

}  // namespace mwc
