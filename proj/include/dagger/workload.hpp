#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dagger/dagger_graph.hpp"
#include "dagger/digraph.hpp"
#include "dagger/error.hpp"
#include "dagger/update_op.hpp"

namespace dagger {

/// Relative weights of the four update kinds; normalized on use.
struct OpRatios {
  double insert_edge = 60;
  double delete_edge = 15;
  double insert_node = 20;
  double delete_node = 5;
};

/// Edge list plus node universe [0, node_count).
struct GraphData {
  std::size_t node_count = 0;
  std::vector<InputEdge> edges;
  friend bool operator==(const GraphData&, const GraphData&) = default;
};

/// Erdős–Rényi style sampling: `m` (source, target) pairs drawn uniformly.
/// Self-loops and repeated pairs are kept, exactly as sampled.
inline GraphData gen_er(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0) throw InputError("gen_er: n must be at least 1");
  if (n > kNoSlot) throw InputError("gen_er: n too large");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  GraphData g{n, {}};
  g.edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const NodeId u = pick(rng);
    const NodeId v = pick(rng);
    g.edges.push_back({u, v});
  }
  return g;
}

/// Directed Barabási–Albert growth. Starting from 2d isolated seed nodes,
/// every new node draws an out-degree uniformly from [1, 2d] and links to
/// that many distinct existing nodes chosen proportionally to degree. Edges
/// point from the new node to the old one and are reversed independently
/// with probability `reverse_prob`; with 0 the output is acyclic.
inline GraphData gen_ba_directed(std::size_t n, std::size_t d, double reverse_prob, std::uint64_t seed) {
  if (d == 0 || n <= 2 * d) throw InputError("gen_ba_directed: need n > 2d >= 2");
  if (n > kNoSlot) throw InputError("gen_ba_directed: n too large");
  if (!(reverse_prob >= 0.0 && reverse_prob <= 1.0)) throw InputError("gen_ba_directed: reverse_prob outside [0,1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution flip(reverse_prob);
  std::uniform_int_distribution<std::size_t> degree(1, 2 * d);
  GraphData g{n, {}};
  g.edges.reserve(n * (2 * d + 1) / 2);
  // Every node appears once per incident edge, plus once for itself so that
  // isolated seeds can be chosen.
  std::vector<NodeId> endpoints;
  endpoints.reserve(n + n * (2 * d + 1));
  for (NodeId s = 0; s < 2 * d; ++s) endpoints.push_back(s);
  std::vector<NodeId> chosen;
  for (std::size_t x = 2 * d; x < n; ++x) {
    const std::size_t want = degree(rng);
    chosen.clear();
    while (chosen.size() < want) {
      std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
      const NodeId y = endpoints[pick(rng)];
      if (std::find(chosen.begin(), chosen.end(), y) == chosen.end()) chosen.push_back(y);
    }
    const auto nx = static_cast<NodeId>(x);
    for (NodeId y : chosen) {
      if (flip(rng)) {
        g.edges.push_back({y, nx});
      } else {
        g.edges.push_back({nx, y});
      }
      endpoints.push_back(y);
      endpoints.push_back(nx);
    }
    endpoints.push_back(nx);
  }
  return g;
}

/// Mirror of a graph under generated updates, with the sampling structures
/// the update generator needs.
class ShadowGraph {
 public:
  explicit ShadowGraph(const GraphData& g) {
    for (NodeId u = 0; u < g.node_count; ++u) add_node(u);
    for (const InputEdge& e : g.edges) add_edge(e.source, e.target);
    next_id_ = static_cast<NodeId>(g.node_count);
  }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_edge(NodeId u, NodeId v) const { return graph_.has_edge(u, v); }
  NodeId next_id() const { return next_id_; }

  NodeId uniform_node(std::mt19937_64& rng) const {
    return nodes_[std::uniform_int_distribution<std::size_t>(0, nodes_.size() - 1)(rng)];
  }

  const InputEdge& uniform_edge(std::mt19937_64& rng) const {
    return edges_[std::uniform_int_distribution<std::size_t>(0, edges_.size() - 1)(rng)];
  }

  /// Node drawn with probability proportional to its total degree: an
  /// endpoint of a uniformly random edge. Falls back to a uniform node when
  /// there are no edges.
  NodeId preferential_node(std::mt19937_64& rng) const {
    if (edges_.empty()) return uniform_node(rng);
    const InputEdge& e = uniform_edge(rng);
    return std::bernoulli_distribution(0.5)(rng) ? e.source : e.target;
  }

  void add_node(NodeId u) {
    graph_.add_node(u);
    node_pos_[u] = nodes_.size();
    nodes_.push_back(u);
    next_id_ = std::max<NodeId>(next_id_, u + 1);
  }

  bool add_edge(NodeId u, NodeId v) {
    if (!graph_.add_edge(u, v)) return false;
    edge_pos_[key(u, v)] = edges_.size();
    edges_.push_back({u, v});
    return true;
  }

  void remove_edge(NodeId u, NodeId v) {
    graph_.remove_edge(u, v);
    const auto it = edge_pos_.find(key(u, v));
    const std::size_t pos = it->second;
    edge_pos_.erase(it);
    if (pos + 1 != edges_.size()) {
      edges_[pos] = edges_.back();
      edge_pos_[key(edges_[pos].source, edges_[pos].target)] = pos;
    }
    edges_.pop_back();
  }

  void remove_node(NodeId u) {
    const std::vector<NodeId> outs(graph_.out(u).begin(), graph_.out(u).end());
    const std::vector<NodeId> ins(graph_.in(u).begin(), graph_.in(u).end());
    for (NodeId v : outs) remove_edge(u, v);
    for (NodeId p : ins) remove_edge(p, u);
    graph_.remove_node(u);
    const auto it = node_pos_.find(u);
    const std::size_t pos = it->second;
    node_pos_.erase(it);
    if (pos + 1 != nodes_.size()) {
      nodes_[pos] = nodes_.back();
      node_pos_[nodes_[pos]] = pos;
    }
    nodes_.pop_back();
  }

 private:
  static std::uint64_t key(NodeId u, NodeId v) { return (std::uint64_t{u} << 32) | v; }

  Digraph graph_;
  std::vector<NodeId> nodes_;
  std::unordered_map<NodeId, std::size_t> node_pos_;
  std::vector<InputEdge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> edge_pos_;
  NodeId next_id_ = 0;
};

struct UpdateGenConfig {
  std::size_t count = 1000;
  OpRatios ratios{};
  /// New nodes draw in- and out-degree uniformly from [0, 2d].
  std::size_t d = 2;
  std::uint64_t seed = 0;
};

/// Generates a valid update sequence for `start`.
///
/// Insert-edge: uniform source, degree-proportional target. Delete-edge:
/// uniform over current edges. Insert-node: fresh id with degree-
/// proportional neighbours. Delete-node: uniform over current nodes, never
/// emptying the graph. An operation that is impossible in the current state
/// is replaced by a draw among the remaining kinds.
inline std::vector<UpdateOp> gen_updates(const GraphData& start, const UpdateGenConfig& cfg) {
  const OpRatios& r = cfg.ratios;
  const std::array<double, 4> weights{r.insert_edge, r.delete_edge, r.insert_node, r.delete_node};
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0)) throw InputError("gen_updates: ratios must be non-negative");
    total += w;
  }
  if (!(total > 0)) throw InputError("gen_updates: ratios must not all be zero");
  if (start.node_count == 0) throw InputError("gen_updates: graph must not be empty");

  constexpr int kTries = 32;
  ShadowGraph shadow(start);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> new_degree(0, 2 * cfg.d);
  std::vector<UpdateOp> ops;
  ops.reserve(cfg.count);

  auto try_insert_edge = [&]() -> bool {
    for (int i = 0; i < kTries; ++i) {
      const NodeId u = shadow.uniform_node(rng);
      const NodeId v = shadow.preferential_node(rng);
      if (u == v || shadow.has_edge(u, v)) continue;
      shadow.add_edge(u, v);
      ops.emplace_back(op::InsertEdge{u, v});
      return true;
    }
    return false;
  };
  auto try_delete_edge = [&]() -> bool {
    if (shadow.edge_count() == 0) return false;
    const InputEdge e = shadow.uniform_edge(rng);
    shadow.remove_edge(e.source, e.target);
    ops.emplace_back(op::DeleteEdge{e.source, e.target});
    return true;
  };
  auto try_insert_node = [&]() -> bool {
    const NodeId u = shadow.next_id();
    if (u == std::numeric_limits<NodeId>::max()) return false;
    auto draw = [&](std::size_t want) {
      std::vector<NodeId> picked;
      want = std::min(want, shadow.node_count());
      for (int i = 0; picked.size() < want && i < kTries * static_cast<int>(want + 1); ++i) {
        const NodeId w = shadow.preferential_node(rng);
        if (std::find(picked.begin(), picked.end(), w) == picked.end()) picked.push_back(w);
      }
      return picked;
    };
    const std::size_t out_degree = new_degree(rng);
    const std::size_t in_degree = new_degree(rng);
    op::InsertNode ins{u, draw(out_degree), draw(in_degree)};
    shadow.add_node(u);
    for (NodeId w : ins.out) shadow.add_edge(u, w);
    for (NodeId w : ins.in) shadow.add_edge(w, u);
    ops.emplace_back(std::move(ins));
    return true;
  };
  auto try_delete_node = [&]() -> bool {
    if (shadow.node_count() < 2) return false;
    const NodeId u = shadow.uniform_node(rng);
    shadow.remove_node(u);
    ops.emplace_back(op::DeleteNode{u});
    return true;
  };

  while (ops.size() < cfg.count) {
    std::array<double, 4> w = weights;
    for (;;) {
      if (w[0] + w[1] + w[2] + w[3] <= 0) throw InputError("gen_updates: no update is possible");
      std::discrete_distribution<int> kind(w.begin(), w.end());
      const int k = kind(rng);
      bool ok = false;
      switch (k) {
        case 0:
          ok = try_insert_edge();
          break;
        case 1:
          ok = try_delete_edge();
          break;
        case 2:
          ok = try_insert_node();
          break;
        default:
          ok = try_delete_node();
          break;
      }
      if (ok) break;
      w[static_cast<std::size_t>(k)] = 0;
    }
  }
  return ops;
}

}  // namespace dagger
