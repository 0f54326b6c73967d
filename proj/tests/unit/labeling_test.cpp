#include <gtest/gtest.h>

#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dagger/index.hpp"
#include "dagger/labeling.hpp"
#include "dagger/workload.hpp"
#include "example_graph.hpp"
#include "oracles.hpp"

namespace {

using dagger::ChildOrder;
using dagger::DaggerGraph;
using dagger::DaggerIndex;
using dagger::Interval;
using dagger::Label;
using dagger::LabelerConfig;
using dagger::NodeId;
using dagger::Slot;

// Dimension-0 interval of every DAG node of the running example, keyed by
// the names used in the worked example: singletons by their own name and
// the components {A,B,C}, {D,E,F,G}, {N,O,P,S,T} as "1", "2", "3".
std::map<std::string, std::string> named_intervals(DaggerIndex& idx) {
  const std::map<std::string, std::string> alias = {{"{A,B,C}", "1"}, {"{D,E,F,G}", "2"}, {"{N,O,P,S,T}", "3"}};
  std::map<std::string, std::string> out;
  for (Slot s : idx.graph().dag_nodes()) {
    std::string name = example_graph::name_of(idx, idx.graph().ref_of(s));
    if (alias.count(name)) name = alias.at(name);
    const auto& iv = idx.labels().at(s, 0);
    out[name] = "[" + std::to_string(iv.b) + "," + std::to_string(iv.e) + "]";
  }
  return out;
}

// Traversal order for the left-hand numbering of the worked example: the
// component {N,O,P,S,T} is visited before any sibling.
LabelerConfig left_order() {
  const auto data = example_graph::graph();
  auto g = DaggerGraph::build(data.node_count, data.edges);
  LabelerConfig cfg{1, 0, ChildOrder::kRanked};
  cfg.rank.assign(g.slot_count(), std::numeric_limits<std::uint32_t>::max());
  cfg.rank[g.find(g.input_slot(example_graph::id("S")))] = 0;
  return cfg;
}

DaggerIndex example_index(LabelerConfig cfg) {
  const auto data = example_graph::graph();
  return DaggerIndex::build(data.node_count, data.edges, cfg);
}

TEST(Subsumes, IntervalContainmentInEveryDimension) {
  const Label outer = {{0, 10}, {3, 9}};
  EXPECT_TRUE(dagger::subsumes(outer, Label{{2, 5}, {3, 9}}));
  EXPECT_TRUE(dagger::subsumes(outer, outer));
  EXPECT_FALSE(dagger::subsumes(outer, Label{{2, 5}, {2, 4}}));
  EXPECT_FALSE(dagger::subsumes(outer, Label{{2, 11}, {4, 5}}));
  EXPECT_FALSE(dagger::subsumes(Label{{3, 5}}, Label{{2, 4}}));
  EXPECT_TRUE(dagger::subsumes(Label{}, Label{}));
  EXPECT_THROW(dagger::subsumes(Label{{0, 1}}, Label{}), std::logic_error);
}

TEST(InitialLabels, WorkedExampleLeftNumbering) {
  auto idx = example_index(left_order());
  const std::map<std::string, std::string> expected = {
      {"3", "[0,5]"},  {"M", "[5,6]"},  {"L", "[0,7]"},  {"H", "[0,8]"},  {"I", "[0,9]"},
      {"1", "[0,12]"}, {"K", "[0,13]"}, {"J", "[0,14]"}, {"2", "[0,18]"}, {"R", "[0,19]"},
  };
  EXPECT_EQ(named_intervals(idx), expected);
}

TEST(InitialLabels, WorkedExampleRightNumbering) {
  auto idx = example_index(LabelerConfig{1, 0, ChildOrder::kReversed});
  const std::map<std::string, std::string> expected = {
      {"3", "[0,5]"},  {"K", "[0,6]"},  {"J", "[0,7]"},  {"M", "[7,8]"},  {"L", "[0,9]"},
      {"H", "[0,10]"}, {"2", "[0,14]"}, {"I", "[0,15]"}, {"1", "[0,18]"}, {"R", "[0,19]"},
  };
  EXPECT_EQ(named_intervals(idx), expected);
}

TEST(InitialLabels, SingleNode) {
  auto idx = DaggerIndex::build(1, {}, LabelerConfig{3, 9});
  EXPECT_EQ(idx.label(dagger::NodeRef::input(0)), (Label{{0, 1}, {0, 1}, {0, 1}}));
}

TEST(InitialLabels, EndEqualsSubtreeSizeForATree) {
  // Out-tree: the end of each node's interval is its post-order counter, so
  // leaves get width 1 and the root's end is the node count.
  const std::vector<dagger::InputEdge> e = {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}};
  auto idx = DaggerIndex::build(6, e, LabelerConfig{4, 17});
  for (std::size_t d = 0; d < 4; ++d) {
    EXPECT_EQ(idx.labels().at(0, d), (Interval{0, 6}));
    for (Slot leaf : {3u, 4u, 5u}) EXPECT_EQ(idx.labels().at(leaf, d).e - idx.labels().at(leaf, d).b, 1u);
  }
}

TEST(InitialLabels, ContainmentAndNoFalseNegativesOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto data = seed % 2 ? dagger::gen_ba_directed(60, 2, 0.0, seed) : dagger::gen_er(60, 90, seed);
    const oracle::Model m(data);
    const oracle::Truth truth(m, true);
    for (std::size_t k = 1; k <= 4; ++k) {
      auto idx = DaggerIndex::build(data.node_count, data.edges, LabelerConfig{k, seed});
      ASSERT_EQ(oracle::audit(idx, truth), "") << "seed " << seed << " k " << k;
    }
  }
}

TEST(InitialLabels, SameSeedSameLabelsOtherSeedOtherOrder) {
  const auto data = dagger::gen_er(200, 400, 3);
  auto a = DaggerIndex::build(data.node_count, data.edges, LabelerConfig{3, 42});
  auto b = DaggerIndex::build(data.node_count, data.edges, LabelerConfig{3, 42});
  auto c = DaggerIndex::build(data.node_count, data.edges, LabelerConfig{3, 43});
  bool any_difference = false;
  for (Slot s : a.graph().dag_nodes()) {
    ASSERT_EQ(a.labels().label(s), b.labels().label(s));
    any_difference |= a.labels().label(s) != c.labels().label(s);
  }
  EXPECT_TRUE(any_difference);
  // Dimensions draw from independent streams.
  bool dims_differ = false;
  for (Slot s : a.graph().dag_nodes()) dims_differ |= a.labels().at(s, 0) != a.labels().at(s, 1);
  EXPECT_TRUE(dims_differ);
}

TEST(Enlarge, AlreadyContainedEdgeChangesNothing) {
  auto idx = example_index(LabelerConfig{1, 0, ChildOrder::kReversed});
  // R already covers M: R=[0,19], M=[7,8].
  std::map<Slot, Label> before;
  for (Slot s : idx.graph().dag_nodes()) before[s] = idx.labels().label(s);
  const auto writes = idx.labels().propagation_writes();
  EXPECT_EQ(idx.insert_edge(example_graph::id("R"), example_graph::id("M")).kind, dagger::InsertCase::kNewDagEdge);
  for (Slot s : idx.graph().dag_nodes()) EXPECT_EQ(idx.labels().label(s), before[s]);
  EXPECT_EQ(idx.labels().propagation_writes(), writes);
}

TEST(Enlarge, OnlyAncestorsOfTheSourceChange) {
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto data = dagger::gen_ba_directed(80, 2, 0.0, seed);
    auto idx = DaggerIndex::build(data.node_count, data.edges, LabelerConfig{2, seed});
    oracle::Model m(data);
    for (int tries = 0; tries < 100; ++tries) {
      const NodeId u = rng() % 80;
      const NodeId v = rng() % 80;
      if (u == v || m.edges.count({u, v}) || oracle::bfs_reach(m, v, u)) continue;
      std::map<Slot, Label> before;
      for (Slot s : idx.graph().dag_nodes()) before[s] = idx.labels().label(s);
      idx.insert_edge(u, v);
      m.apply(dagger::op::InsertEdge{u, v});
      for (Slot s : idx.graph().dag_nodes()) {
        const NodeId w = idx.graph().ref_of(s).id;
        if (!oracle::bfs_reach(m, w, u)) {
          ASSERT_EQ(idx.labels().label(s), before[s]) << "non-ancestor " << w;
        }
      }
      break;
    }
    ASSERT_EQ(oracle::audit(idx, oracle::Truth(m, true)), "");
  }
}

TEST(Split, TwoCycleIntervalsNestAfterDeletion) {
  // 2 -> {0 <-> 1}; deleting 1 -> 0 leaves the chain 2 -> 0 -> 1.
  const std::vector<dagger::InputEdge> e = {{2, 0}, {0, 1}, {1, 0}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto idx = DaggerIndex::build(3, e, LabelerConfig{2, seed});
    const Label old = idx.label(idx.component(0));
    ASSERT_EQ(idx.delete_edge(1, 0).kind, dagger::DeleteCase::kSplit);
    const Label l0 = idx.label(idx.component(0));
    const Label l1 = idx.label(idx.component(1));
    const Label l2 = idx.label(idx.component(2));
    for (std::size_t d = 0; d < 2; ++d) {
      EXPECT_LE(l0[d].b, l1[d].b);
      EXPECT_GE(l0[d].e, l1[d].e + 1);
      EXPECT_LE(l2[d].b, l0[d].b);
      EXPECT_GE(l2[d].e, l0[d].e + 1);
      // The pieces stay inside the room the old component occupied, or grow
      // it only at the top.
      EXPECT_GE(l1[d].b, old[d].b);
    }
  }
}

TEST(NewNode, LabelSpansItsOutNeighbours) {
  auto idx = example_index(left_order());
  ASSERT_EQ(example_graph::interval(idx, "M"), "[5,6]");
  const NodeId outs[] = {example_graph::id("M")};
  idx.insert_node(19, outs, {});
  EXPECT_EQ(idx.label(dagger::NodeRef::input(19)), (Label{{5, 7}}));
}

TEST(NewNode, IsolatedNodeInEmptyIndex) {
  auto idx = DaggerIndex::build(0, {}, LabelerConfig{2, 0});
  idx.insert_node(3, {}, {});
  EXPECT_EQ(idx.label(dagger::NodeRef::input(3)), (Label{{0, 1}, {0, 1}}));
  idx.insert_node(4, {}, {});
  EXPECT_EQ(idx.label(dagger::NodeRef::input(4)), (Label{{1, 2}, {1, 2}}));
}

TEST(ZeroDimensions, EverythingSubsumes) {
  auto idx = example_index(LabelerConfig{0, 0});
  EXPECT_EQ(idx.k(), 0u);
  EXPECT_TRUE(idx.label(example_graph::node(idx, "R")).empty());
  EXPECT_TRUE(idx.reachable(example_graph::id("R"), example_graph::id("S")));
  EXPECT_FALSE(idx.reachable(example_graph::id("M"), example_graph::id("R")));
}

}  // namespace
