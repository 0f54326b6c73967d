#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <variant>
#include <vector>

#include "dagger/update_op.hpp"
#include "dagger/workload.hpp"
#include "oracles.hpp"

namespace {

using dagger::GraphData;
using dagger::NodeId;
using dagger::OpKind;
using dagger::UpdateGenConfig;
using dagger::UpdateOp;
namespace op = dagger::op;

TEST(GenEr, SamplesExactlyMPairsInRange) {
  const auto g = dagger::gen_er(50, 300, 4);
  EXPECT_EQ(g.node_count, 50u);
  ASSERT_EQ(g.edges.size(), 300u);
  for (const auto& e : g.edges) {
    EXPECT_LT(e.source, 50u);
    EXPECT_LT(e.target, 50u);
  }
  EXPECT_EQ(g, dagger::gen_er(50, 300, 4));
  EXPECT_NE(g, dagger::gen_er(50, 300, 5));
  EXPECT_THROW(dagger::gen_er(0, 3, 1), dagger::InputError);
}

TEST(GenBa, DegreesAndAcyclicityWithoutReversal) {
  const std::size_t d = 3;
  const auto g = dagger::gen_ba_directed(500, d, 0.0, 9);
  EXPECT_EQ(g.node_count, 500u);
  std::vector<std::set<NodeId>> out(500);
  for (const auto& e : g.edges) {
    // New nodes point at older ones.
    ASSERT_GT(e.source, e.target);
    ASSERT_TRUE(out[e.source].insert(e.target).second) << "duplicate edge";
  }
  for (NodeId u = 0; u < 2 * d; ++u) EXPECT_TRUE(out[u].empty());
  for (NodeId u = 2 * d; u < 500; ++u) {
    EXPECT_GE(out[u].size(), 1u);
    EXPECT_LE(out[u].size(), 2 * d);
  }
  EXPECT_EQ(g, dagger::gen_ba_directed(500, d, 0.0, 9));
}

TEST(GenBa, ReversalProbabilityIsRespected) {
  const auto g = dagger::gen_ba_directed(4000, 2, 0.5, 1);
  std::size_t reversed = 0;
  for (const auto& e : g.edges) reversed += e.source < e.target;
  const double frac = static_cast<double>(reversed) / static_cast<double>(g.edges.size());
  EXPECT_NEAR(frac, 0.5, 0.02);
  const auto all = dagger::gen_ba_directed(300, 2, 1.0, 1);
  for (const auto& e : all.edges) EXPECT_LT(e.source, e.target);
}

TEST(GenBa, PreferentialAttachmentSkewsDegrees) {
  const std::size_t n = 5000;
  const auto g = dagger::gen_ba_directed(n, 2, 0.0, 2);
  auto max_degree = [n](const std::vector<dagger::InputEdge>& edges) {
    std::vector<std::size_t> deg(n, 0);
    for (const auto& e : edges) {
      ++deg[e.source];
      ++deg[e.target];
    }
    return *std::max_element(deg.begin(), deg.end());
  };
  // Same growth process with uniform attachment, as a reference.
  std::mt19937_64 rng(2);
  std::vector<dagger::InputEdge> uniform;
  for (NodeId x = 4; x < n; ++x) {
    const std::size_t want = 1 + rng() % 4;
    std::set<NodeId> chosen;
    while (chosen.size() < want) chosen.insert(static_cast<NodeId>(rng() % x));
    for (NodeId y : chosen) uniform.push_back({x, y});
  }
  EXPECT_GT(max_degree(g.edges), 3 * max_degree(uniform));
}

TEST(GenBa, RejectsBadParameters) {
  EXPECT_THROW(dagger::gen_ba_directed(4, 2, 0.5, 1), dagger::InputError);
  EXPECT_THROW(dagger::gen_ba_directed(10, 0, 0.5, 1), dagger::InputError);
  EXPECT_THROW(dagger::gen_ba_directed(10, 2, 1.5, 1), dagger::InputError);
}

// Replays `ops` on a set model and fails on the first operation that is
// not valid in the state it is applied to.
void expect_valid(const GraphData& start, const std::vector<UpdateOp>& ops, std::size_t d) {
  oracle::Model m(start);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const UpdateOp& o = ops[i];
    if (const auto* x = std::get_if<op::InsertEdge>(&o)) {
      ASSERT_TRUE(m.nodes.count(x->u) && m.nodes.count(x->v)) << "op " << i;
      ASSERT_NE(x->u, x->v) << "op " << i;
      ASSERT_FALSE(m.edges.count({x->u, x->v})) << "op " << i;
    } else if (const auto* x = std::get_if<op::DeleteEdge>(&o)) {
      ASSERT_TRUE(m.edges.count({x->u, x->v})) << "op " << i;
    } else if (const auto* x = std::get_if<op::InsertNode>(&o)) {
      ASSERT_FALSE(m.nodes.count(x->u)) << "op " << i;
      ASSERT_LE(x->out.size(), 2 * d);
      ASSERT_LE(x->in.size(), 2 * d);
      for (NodeId w : x->out) ASSERT_TRUE(m.nodes.count(w));
      for (NodeId w : x->in) ASSERT_TRUE(m.nodes.count(w));
      ASSERT_EQ(std::set<NodeId>(x->out.begin(), x->out.end()).size(), x->out.size());
      ASSERT_EQ(std::set<NodeId>(x->in.begin(), x->in.end()).size(), x->in.size());
    } else if (const auto* x = std::get_if<op::DeleteNode>(&o)) {
      ASSERT_TRUE(m.nodes.count(x->u)) << "op " << i;
      ASSERT_GT(m.nodes.size(), 1u);
    } else {
      FAIL() << "generator emitted a query";
    }
    m.apply(o);
  }
}

TEST(GenUpdates, EveryOperationIsValidWhenApplied) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = dagger::gen_er(30, 45, seed);
    UpdateGenConfig cfg;
    cfg.count = 2000;
    cfg.seed = seed;
    const auto ops = dagger::gen_updates(g, cfg);
    ASSERT_EQ(ops.size(), 2000u);
    expect_valid(g, ops, cfg.d);
  }
}

TEST(GenUpdates, MixFollowsTheRatios) {
  const auto g = dagger::gen_ba_directed(2000, 2, 0.5, 1);
  UpdateGenConfig cfg;
  cfg.count = 20000;
  cfg.seed = 3;
  const auto ops = dagger::gen_updates(g, cfg);
  std::array<double, dagger::kOpKindCount> counts{};
  for (const auto& o : ops) counts[static_cast<std::size_t>(dagger::kind_of(o))] += 1;
  const double n = static_cast<double>(ops.size());
  EXPECT_NEAR(counts[static_cast<std::size_t>(OpKind::kInsertEdge)] / n, 0.60, 0.02);
  EXPECT_NEAR(counts[static_cast<std::size_t>(OpKind::kDeleteEdge)] / n, 0.15, 0.02);
  EXPECT_NEAR(counts[static_cast<std::size_t>(OpKind::kInsertNode)] / n, 0.20, 0.02);
  EXPECT_NEAR(counts[static_cast<std::size_t>(OpKind::kDeleteNode)] / n, 0.05, 0.02);
}

TEST(GenUpdates, ImpossibleKindsAreRedrawn) {
  // Without edges, edge deletions are impossible: every draw falls back to
  // a node deletion until only one node is left, and then nothing is
  // possible at all.
  const GraphData g{3, {}};
  UpdateGenConfig cfg;
  cfg.ratios = {0, 1, 0, 1};
  cfg.count = 2;
  const auto ops = dagger::gen_updates(g, cfg);
  ASSERT_EQ(ops.size(), 2u);
  for (const auto& o : ops) EXPECT_EQ(dagger::kind_of(o), OpKind::kDeleteNode);
  cfg.count = 3;
  EXPECT_THROW(dagger::gen_updates(g, cfg), dagger::InputError);

  cfg.ratios = {1, 1, 0, 0};
  cfg.count = 200;
  const auto mixed = dagger::gen_updates(g, cfg);
  EXPECT_EQ(dagger::kind_of(mixed.front()), OpKind::kInsertEdge);
  expect_valid(g, mixed, cfg.d);
}

TEST(GenUpdates, DeterministicAndRejectsBadConfigs) {
  const auto g = dagger::gen_er(40, 80, 2);
  UpdateGenConfig cfg;
  cfg.count = 300;
  cfg.seed = 11;
  EXPECT_EQ(dagger::gen_updates(g, cfg), dagger::gen_updates(g, cfg));
  cfg.ratios = {0, 0, 0, 0};
  EXPECT_THROW(dagger::gen_updates(g, cfg), dagger::InputError);
  cfg.ratios = {1, -1, 0, 0};
  EXPECT_THROW(dagger::gen_updates(g, cfg), dagger::InputError);
  cfg.ratios = {};
  EXPECT_THROW(dagger::gen_updates(GraphData{0, {}}, cfg), dagger::InputError);
}

TEST(UpdateOp, KindsAndTags) {
  EXPECT_EQ(dagger::kind_of(UpdateOp{op::Query{0, 1}}), OpKind::kQuery);
  EXPECT_EQ(dagger::kind_of(UpdateOp{op::DeleteNode{0}}), OpKind::kDeleteNode);
  EXPECT_EQ(dagger::tag(OpKind::kQuery), "Q");
  EXPECT_EQ(dagger::tag(OpKind::kInsertEdge), "EI");
  EXPECT_EQ(dagger::tag(OpKind::kDeleteEdge), "ED");
  EXPECT_EQ(dagger::tag(OpKind::kInsertNode), "NI");
  EXPECT_EQ(dagger::tag(OpKind::kDeleteNode), "ND");
}

}  // namespace
