#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dagger/digraph.hpp"
#include "dagger/error.hpp"
#include "dagger/index.hpp"
#include "dagger/query.hpp"
#include "dagger/update_op.hpp"
#include "dagger/workload.hpp"

namespace dagger {

/// Either the index-free DFS baseline or the index with k label dimensions.
struct Variant {
  bool dfs = false;
  std::size_t k = 1;

  static Variant parse(const std::string& name) {
    if (name == "dfs") return {true, 0};
    if (name.size() == 3 && name.starts_with("dg") && name[2] >= '0' && name[2] <= '9') {
      return {false, static_cast<std::size_t>(name[2] - '0')};
    }
    throw InputError("unknown variant '" + name + "' (expected dfs, dg0, dg1, dg2, ...)");
  }

  std::string name() const { return dfs ? "dfs" : "dg" + std::to_string(k); }
};

struct BenchConfig {
  Variant variant{};
  /// Random queries issued after every update.
  std::size_t qpu = 0;
  std::uint64_t seed = 0;
  /// Leading workload operations executed but left out of the statistics.
  std::size_t warmup = 0;
  std::string dataset;
  /// Keep every query answer in the report, in execution order.
  bool keep_answers = false;
};

struct KindStats {
  std::size_t count = 0;
  double total_ms = 0;
  double mean_ms() const { return count ? total_ms / static_cast<double>(count) : 0.0; }
};

struct BenchReport {
  std::string dataset;
  std::string variant;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t qpu = 0;
  std::size_t warmup = 0;
  /// Counted operations, queries included; equals the sum of per-kind counts.
  std::size_t executed_ops = 0;
  std::array<KindStats, kOpKindCount> kinds{};
  std::size_t query_true = 0;
  /// FNV-1a over the sequence of all query answers, warm-up included.
  std::uint64_t answers_digest = 0xcbf29ce484222325ULL;
  std::vector<std::uint8_t> answers;
  double build_s = 0;
  /// Wall time of the replay, index construction excluded.
  double total_s = 0;

  const KindStats& operator[](OpKind k) const { return kinds[static_cast<std::size_t>(k)]; }
};

namespace detail {

/// Uniform sampling over the current node set.
class NodeSampler {
 public:
  explicit NodeSampler(std::size_t n) {
    nodes_.reserve(n);
    for (NodeId u = 0; u < n; ++u) add(u);
  }
  void add(NodeId u) {
    pos_[u] = nodes_.size();
    nodes_.push_back(u);
  }
  void remove(NodeId u) {
    const auto it = pos_.find(u);
    if (it == pos_.end()) return;
    const std::size_t p = it->second;
    pos_.erase(it);
    if (p + 1 != nodes_.size()) {
      nodes_[p] = nodes_.back();
      pos_[nodes_[p]] = p;
    }
    nodes_.pop_back();
  }
  bool empty() const { return nodes_.empty(); }
  NodeId draw(std::mt19937_64& rng) const {
    return nodes_[std::uniform_int_distribution<std::size_t>(0, nodes_.size() - 1)(rng)];
  }

 private:
  std::vector<NodeId> nodes_;
  std::unordered_map<NodeId, std::size_t> pos_;
};

/// The DFS baseline: a bare input graph with no index.
class PlainGraph {
 public:
  explicit PlainGraph(const GraphData& g) : g_(g.node_count) {
    for (const InputEdge& e : g.edges) {
      require(e.source);
      require(e.target);
      g_.add_edge(e.source, e.target);
    }
  }
  bool reachable(NodeId u, NodeId v) { return search_.run(g_, u, v); }
  void apply(const UpdateOp& op) {
    std::visit(
        [this](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, op::InsertEdge>) {
            require(o.u);
            require(o.v);
            g_.add_edge(o.u, o.v);
          } else if constexpr (std::is_same_v<T, op::DeleteEdge>) {
            require(o.u);
            require(o.v);
            if (o.u != o.v && !g_.remove_edge(o.u, o.v)) {
              throw InputError("edge (" + std::to_string(o.u) + "," + std::to_string(o.v) + ") does not exist");
            }
          } else if constexpr (std::is_same_v<T, op::InsertNode>) {
            if (g_.has_node(o.u)) throw InputError("node " + std::to_string(o.u) + " already exists");
            for (NodeId w : o.out) require_or_self(w, o.u);
            for (NodeId w : o.in) require_or_self(w, o.u);
            g_.add_node(o.u);
            for (NodeId w : o.out) g_.add_edge(o.u, w);
            for (NodeId w : o.in) g_.add_edge(w, o.u);
          } else if constexpr (std::is_same_v<T, op::DeleteNode>) {
            require(o.u);
            g_.remove_node(o.u);
          } else {
            reachable(o.u, o.v);
          }
        },
        op);
  }

 private:
  void require(NodeId u) const {
    if (!g_.has_node(u)) throw InputError("unknown node " + std::to_string(u));
  }
  void require_or_self(NodeId w, NodeId u) const {
    if (w != u) require(w);
  }
  Digraph g_;
  GraphSearch search_;
};

}  // namespace detail

/// Replays `workload` on `graph`, interleaving `cfg.qpu` random queries
/// after every update, and times each operation.
inline BenchReport run_bench(const GraphData& graph, const std::vector<UpdateOp>& workload, const BenchConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  BenchReport rep;
  rep.dataset = cfg.dataset;
  rep.variant = cfg.variant.name();
  rep.k = cfg.variant.dfs ? 0 : cfg.variant.k;
  rep.seed = cfg.seed;
  rep.qpu = cfg.qpu;
  rep.warmup = cfg.warmup;

  const auto build_start = Clock::now();
  std::optional<detail::PlainGraph> plain;
  std::optional<DaggerIndex> index;
  if (cfg.variant.dfs) {
    plain.emplace(graph);
  } else {
    index.emplace(DaggerIndex::build(graph.node_count, graph.edges, LabelerConfig{cfg.variant.k, cfg.seed}));
  }
  rep.build_s = std::chrono::duration<double>(Clock::now() - build_start).count();

  detail::NodeSampler sampler(graph.node_count);
  std::mt19937_64 rng(mix_seed(cfg.seed ^ 0x5175657279ULL));

  auto record = [&](bool counted, OpKind kind, Clock::duration spent) {
    if (!counted) return;
    KindStats& ks = rep.kinds[static_cast<std::size_t>(kind)];
    ++ks.count;
    ks.total_ms += std::chrono::duration<double, std::milli>(spent).count();
    ++rep.executed_ops;
  };
  auto note_answer = [&](bool counted, bool answer) {
    rep.answers_digest = (rep.answers_digest ^ (answer ? 1u : 0u)) * 0x100000001b3ULL;
    if (cfg.keep_answers) rep.answers.push_back(answer ? 1 : 0);
    if (counted && answer) ++rep.query_true;
  };
  auto query = [&](NodeId u, NodeId v) {
    return plain ? plain->reachable(u, v) : index->reachable(u, v);
  };

  const auto replay_start = Clock::now();
  for (std::size_t i = 0; i < workload.size(); ++i) {
    const UpdateOp& op = workload[i];
    const bool counted = i >= cfg.warmup;
    const OpKind kind = kind_of(op);
    try {
      if (const auto* q = std::get_if<op::Query>(&op)) {
        const auto t0 = Clock::now();
        const bool ans = query(q->u, q->v);
        record(counted, kind, Clock::now() - t0);
        note_answer(counted, ans);
        continue;
      }
      const auto t0 = Clock::now();
      if (plain) {
        plain->apply(op);
      } else {
        index->apply(op);
      }
      record(counted, kind, Clock::now() - t0);
      if (const auto* ins = std::get_if<op::InsertNode>(&op)) sampler.add(ins->u);
      if (const auto* del = std::get_if<op::DeleteNode>(&op)) sampler.remove(del->u);
      for (std::size_t j = 0; j < cfg.qpu && !sampler.empty(); ++j) {
        const NodeId u = sampler.draw(rng);
        const NodeId v = sampler.draw(rng);
        const auto q0 = Clock::now();
        const bool ans = query(u, v);
        record(counted, OpKind::kQuery, Clock::now() - q0);
        note_answer(counted, ans);
      }
    } catch (const InputError& e) {
      throw InputError("workload op " + std::to_string(i) + ": " + e.what());
    }
  }
  rep.total_s = std::chrono::duration<double>(Clock::now() - replay_start).count();
  return rep;
}

/// Flat JSON object with a fixed key order.
inline nlohmann::ordered_json to_json(const BenchReport& r) {
  nlohmann::ordered_json j;
  j["dataset"] = r.dataset;
  j["variant"] = r.variant;
  j["k"] = r.k;
  j["seed"] = r.seed;
  j["qpu"] = r.qpu;
  j["warmup"] = r.warmup;
  j["executed_ops"] = r.executed_ops;
  for (std::size_t i = 0; i < kOpKindCount; ++i) {
    const std::string t(tag(static_cast<OpKind>(i)));
    j[t + "_count"] = r.kinds[i].count;
    j[t + "_mean_ms"] = r.kinds[i].mean_ms();
  }
  j["query_true"] = r.query_true;
  j["answers_digest"] = r.answers_digest;
  j["build_s"] = r.build_s;
  j["total_s"] = r.total_s;
  return j;
}

/// Report fields that depend on the clock.
inline bool is_timing_field(std::string_view key) {
  return key == "build_s" || key == "total_s" || key.ends_with("_mean_ms");
}

inline void write_csv_header(std::ostream& out) {
  out << "dataset,variant,k,seed,qpu,warmup,executed_ops";
  for (std::size_t i = 0; i < kOpKindCount; ++i) {
    const std::string t(tag(static_cast<OpKind>(i)));
    out << ',' << t << "_count," << t << "_mean_ms";
  }
  out << ",query_true,answers_digest,build_s,total_s\n";
}

inline void write_csv_row(std::ostream& out, const BenchReport& r) {
  // Every field is emitted through the JSON serializer so that both formats
  // agree on number formatting.
  const auto j = to_json(r);
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    if (!first) out << ',';
    first = false;
    out << (value.is_string() ? value.get<std::string>() : value.dump());
  }
  out << '\n';
}

}  // namespace dagger
