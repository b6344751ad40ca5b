#include <gtest/gtest.h>

#include "mwc/max_flow.hpp"
#include "testing.hpp"

using namespace mwc;
using mwc::testing::Gen;

TEST(MaxFlow, DirectedAndUndirectedValues) {
  MaxFlow f(4);
  f.add_directed(0, 1, 3);
  f.add_directed(0, 2, 2);
  f.add_directed(1, 2, 5);
  f.add_directed(1, 3, 2);
  f.add_directed(2, 3, 3);
  EXPECT_DOUBLE_EQ(f.run(0, 3), 5.0);

  MaxFlow u(3);
  u.add_undirected(0, 1, 2);
  u.add_undirected(1, 2, 1);
  EXPECT_DOUBLE_EQ(u.run(2, 0), 1.0);
}

TEST(IsolatingCut, StarLeaf) {
  // center 3, terminal leaves 1 and 2
  const WeightedGraph g(3, {{1, 3, 1}, {2, 3, 1}});
  const TerminalSet t({1, 2}, 3);
  const auto c = min_isolating_cut(g, t, 0);
  EXPECT_EQ(c.set.members(), (std::vector<Vertex>{1}));
  EXPECT_DOUBLE_EQ(c.cost, 1.0);
}

TEST(IsolatingCut, PathHasMinimalSourceSide) {
  const WeightedGraph g(3, {{1, 2, 1}, {2, 3, 1}});
  const TerminalSet t({1, 3}, 3);
  const auto c = min_isolating_cut(g, t, 0);
  EXPECT_DOUBLE_EQ(c.cost, 1.0);
  EXPECT_EQ(c.set.members(), (std::vector<Vertex>{1}));
}

TEST(IsolatingCut, DisconnectedTerminalGetsItsComponent) {
  const WeightedGraph g(4, {{1, 2, 1}, {3, 4, 1}});
  const TerminalSet t({1, 3}, 4);
  const auto c = min_isolating_cut(g, t, 0);
  EXPECT_DOUBLE_EQ(c.cost, 0.0);
  EXPECT_TRUE(c.set.contains(1));
  EXPECT_FALSE(c.set.contains(3));
}

TEST(IsolatingCut, InfinitePathBetweenTerminalsCostsInfinity) {
  const WeightedGraph g(3, {{1, 2, kInfinite}, {2, 3, kInfinite}});
  const TerminalSet t({1, 3}, 3);
  EXPECT_TRUE(std::isinf(min_isolating_cut(g, t, 0).cost));
}

TEST(IsolatingCut, MatchesEnumeration) {
  Gen gen(2024);
  for (int round = 0; round < 150; ++round) {
    const int n = gen.uniform_int(3, 11);
    const int k = gen.uniform_int(2, std::min(n, 5));
    const auto raw = mwc::testing::random_instance(gen, n, k, gen.uniform() * 0.8 + 0.1, 6);
    const auto g = raw.graph();
    const auto t = raw.terminal_set();
    const auto cuts = isolating_cuts(g, t);
    ASSERT_EQ(cuts.size(), static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const auto& c = cuts[static_cast<std::size_t>(i)];
      ASSERT_EQ(t.count_in(c.set), 1);
      ASSERT_TRUE(c.set.contains(t[static_cast<std::size_t>(i)]));
      ASSERT_DOUBLE_EQ(c.cost, boundary_weight(g, c.set));
      ASSERT_NEAR(c.cost, mwc::testing::reference_isolating(raw, i), 1e-9) << "round " << round << " terminal " << i;
    }
  }
}
