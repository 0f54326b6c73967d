#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "dagger/digraph.hpp"
#include "dagger/edge_bag.hpp"
#include "dagger/error.hpp"
#include "dagger/scratch.hpp"
#include "dagger/tarjan.hpp"

namespace {

using dagger::Digraph;

TEST(Digraph, EdgesHaveSetSemantics) {
  Digraph g(3);
  EXPECT_TRUE(g.add_edge(0, 1));
  EXPECT_FALSE(g.add_edge(0, 1));
  EXPECT_FALSE(g.add_edge(2, 2));
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_FALSE(g.has_edge(1, 0));
  EXPECT_TRUE(g.remove_edge(0, 1));
  EXPECT_FALSE(g.remove_edge(0, 1));
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(Digraph, RemoveNodeDropsIncidentEdges) {
  Digraph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(3, 1);
  g.add_edge(0, 2);
  g.remove_node(1);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_FALSE(g.has_node(1));
  EXPECT_TRUE(g.out(3).empty());
  EXPECT_EQ(std::vector<Digraph::Id>(g.in(2).begin(), g.in(2).end()), std::vector<Digraph::Id>{0});
  EXPECT_TRUE(g.add_node(1));
  EXPECT_FALSE(g.add_node(1));
  EXPECT_TRUE(g.out(1).empty());
}

TEST(Digraph, SparseIdsAndErrors) {
  Digraph g;
  EXPECT_TRUE(g.add_node(10));
  EXPECT_EQ(g.id_bound(), 11u);
  EXPECT_EQ(g.node_count(), 1u);
  EXPECT_THROW(g.add_edge(10, 3), dagger::InputError);
  EXPECT_THROW(g.remove_node(3), dagger::InputError);
}

TEST(Digraph, AdjacencyKeepsInsertionOrder) {
  Digraph g(5);
  for (Digraph::Id v : {4u, 2u, 3u, 1u}) g.add_edge(0, v);
  g.remove_edge(0, 2);
  EXPECT_EQ(std::vector<Digraph::Id>(g.out(0).begin(), g.out(0).end()), (std::vector<Digraph::Id>{4, 3, 1}));
}

TEST(EdgeBag, CountsAndRemovals) {
  dagger::EdgeBag bag;
  bag.add(7, 1);
  bag.add(9, 2);
  bag.add(7, 3);
  EXPECT_EQ(bag.count(7), 4u);
  EXPECT_EQ(bag.count(9), 2u);
  EXPECT_EQ(bag.count(1), 0u);
  EXPECT_EQ(bag.size(), 2u);
  EXPECT_EQ(bag.subtract(7, 1), 3u);
  EXPECT_EQ(bag.subtract(7, 3), 0u);
  EXPECT_EQ(bag.size(), 1u);
  EXPECT_EQ(bag.subtract(42, 1), 0u);
}

TEST(EdgeBag, LargeBagMatchesMultisetModel) {
  dagger::EdgeBag bag;
  std::multiset<dagger::EdgeBag::Slot> model;
  std::mt19937 rng(5);
  for (int i = 0; i < 5000; ++i) {
    const dagger::EdgeBag::Slot s = rng() % 60;
    if (rng() % 3) {
      bag.add(s, 1);
      model.insert(s);
    } else if (model.count(s)) {
      bag.subtract(s, 1);
      model.erase(model.find(s));
    }
    ASSERT_EQ(bag.count(s), model.count(s));
  }
  std::set<dagger::EdgeBag::Slot> distinct(model.begin(), model.end());
  EXPECT_EQ(bag.size(), distinct.size());
  for (dagger::EdgeBag::Slot s = 0; s < 60; ++s) EXPECT_EQ(bag.count(s), model.count(s));
}

TEST(Scratch, EpochArrayForgetsOnNext) {
  dagger::EpochArray<int> a;
  a.next();
  a.set(3, 9);
  EXPECT_TRUE(a.has(3));
  EXPECT_EQ(a.get(3), 9);
  EXPECT_FALSE(a.has(2));
  a.next();
  EXPECT_FALSE(a.has(3));
  EXPECT_EQ(a.get(3, -1), -1);
}

TEST(Tarjan, ComponentsInReverseTopologicalOrder) {
  // 0 -> {1,2} cycle -> 3, 4 isolated.
  Digraph g(5);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 1);
  g.add_edge(2, 3);
  const auto p = dagger::tarjan_scc(g);
  ASSERT_EQ(p.members.size(), 4u);
  EXPECT_EQ(p.component[1], p.component[2]);
  EXPECT_NE(p.component[0], p.component[1]);
  // A component completes only after everything it reaches.
  EXPECT_LT(p.component[3], p.component[1]);
  EXPECT_LT(p.component[1], p.component[0]);
}

TEST(Tarjan, DeepChainDoesNotOverflowTheStack) {
  const std::size_t n = 200000;
  Digraph g(n);
  for (Digraph::Id i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  g.add_edge(static_cast<Digraph::Id>(n - 1), 0);
  const auto p = dagger::tarjan_scc(g);
  ASSERT_EQ(p.members.size(), 1u);
  EXPECT_EQ(p.members[0].size(), n);
}

}  // namespace
