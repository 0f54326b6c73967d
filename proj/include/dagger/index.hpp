#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "dagger/dagger_graph.hpp"
#include "dagger/error.hpp"
#include "dagger/labeling.hpp"
#include "dagger/query.hpp"
#include "dagger/scratch.hpp"
#include "dagger/update_op.hpp"

namespace dagger {

enum class InsertCase : std::uint8_t {
  kExisting,      // the input edge was already present
  kIntra,         // both endpoints already share a component
  kMultiplicity,  // the DAG edge existed; its count grew
  kNewDagEdge,    // a new DAG edge, labels enlarged
  kMerge,         // the edge closed a cycle; components merged
};

enum class DeleteCase : std::uint8_t {
  kMultiplicity,   // inter-component edge, DAG edge survives
  kDagEdge,        // inter-component edge, DAG edge removed
  kIntraIntact,    // intra-component edge, component unchanged
  kSplit,          // intra-component edge, component split
};

/// Category of an edge update relative to the current components.
enum class UpdateClass : std::uint8_t { kInsertIntra, kInsertInter, kDeleteIntra, kDeleteInter };

struct InsertOutcome {
  InsertCase kind = InsertCase::kExisting;
  /// For merges: the merged DAG nodes, head of the new edge's component
  /// first and its tail's component last, as they were before merging.
  std::vector<NodeRef> merge_list;
  NodeRef representative{};
};

struct DeleteOutcome {
  DeleteCase kind = DeleteCase::kMultiplicity;
  /// For splits: the extracted components followed by the remainder.
  std::vector<NodeRef> components;
};

/// Fully dynamic reachability index: a layered SCC graph plus interval
/// labels, kept consistent under edge/node insertion and deletion.
///
/// Not thread-safe; queries mutate internal caches.
class DaggerIndex {
 public:
  explicit DaggerIndex(LabelerConfig cfg = {}) : labels_(cfg) {}

  static DaggerIndex build(std::size_t node_count, std::span<const InputEdge> edges, LabelerConfig cfg = {}) {
    DaggerIndex idx(cfg);
    idx.g_ = DaggerGraph::build(node_count, edges);
    idx.labels_.initial_labels(idx.g_);
    return idx;
  }

  DaggerGraph& graph() { return g_; }
  const DaggerGraph& graph() const { return g_; }
  const LabelStore& labels() const { return labels_; }
  std::size_t k() const { return labels_.k(); }

  Label label(NodeRef r) const {
    const Slot s = g_.slot_of(r);
    if (!g_.is_dag_node(s)) throw std::logic_error(to_string(r) + " is not a current DAG node");
    return labels_.label(s);
  }

  NodeRef component(NodeId u) { return g_.ref_of(g_.find(g_.input_slot(u))); }

  /// Recomputes every label from scratch.
  void relabel() { labels_.initial_labels(g_); }

  // ----------------------------------------------------------------- queries

  bool reachable(NodeId u, NodeId v, QueryStats* stats = nullptr) {
    const Slot s = g_.find(g_.input_slot(u));
    const Slot t = g_.find(g_.input_slot(v));
    return search_.run(g_, labels_, s, t, stats);
  }

  /// Label-pruned search between current DAG nodes.
  bool dag_reachable(Slot s, Slot t, QueryStats* stats = nullptr) { return search_.run(g_, labels_, s, t, stats); }

  // ----------------------------------------------------------------- updates

  /// Whether an insertion or deletion of (u,v) stays inside one component.
  UpdateClass classify(NodeId u, NodeId v, bool insert) {
    const bool intra = g_.find(g_.input_slot(u)) == g_.find(g_.input_slot(v));
    if (insert) return intra ? UpdateClass::kInsertIntra : UpdateClass::kInsertInter;
    return intra ? UpdateClass::kDeleteIntra : UpdateClass::kDeleteInter;
  }

  InsertOutcome insert_edge(NodeId u, NodeId v) {
    const Slot us = g_.input_slot(u);
    const Slot vs = g_.input_slot(v);
    InsertOutcome out;
    if (us == vs || g_.input().has_edge(us, vs)) return out;
    const Slot s = g_.find(us);
    const Slot t = g_.find(vs);
    if (s == t) {
      g_.add_input_edge(us, vs);
      out.kind = InsertCase::kIntra;
      return out;
    }
    if (g_.multiplicity(s, t) > 0) {
      g_.add_input_edge(us, vs);
      g_.add_dag_edge(s, t, 1);
      out.kind = InsertCase::kMultiplicity;
      return out;
    }
    if (!search_.run(g_, labels_, t, s)) {
      g_.add_input_edge(us, vs);
      g_.add_dag_edge(s, t, 1);
      labels_.enlarge_to_cover(g_, s, t);
      out.kind = InsertCase::kNewDagEdge;
      return out;
    }
    const std::vector<Slot> list = collect_merge_list(t, s);
    out.kind = InsertCase::kMerge;
    out.merge_list.reserve(list.size());
    for (Slot x : list) out.merge_list.push_back(g_.ref_of(x));
    g_.add_input_edge(us, vs);
    const Label inherited = labels_.label(t);
    const Slot rep = g_.merge_components(std::span<const Slot>(list));
    labels_.reserve_slots(g_.slot_count());
    labels_.assign(rep, inherited);
    const Slot seed[] = {rep};
    labels_.propagate_up(g_, seed);
    out.representative = g_.ref_of(rep);
    return out;
  }

  DeleteOutcome delete_edge(NodeId u, NodeId v) {
    const Slot us = g_.input_slot(u);
    const Slot vs = g_.input_slot(v);
    DeleteOutcome out;
    if (us == vs) {
      out.kind = DeleteCase::kIntraIntact;
      return out;
    }
    if (!g_.input().has_edge(us, vs)) {
      throw InputError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") does not exist");
    }
    const Slot s = g_.find(us);
    const Slot t = g_.find(vs);
    if (s != t) {
      const std::uint32_t left = g_.remove_dag_edge(s, t, 1);
      g_.remove_input_edge(us, vs);
      out.kind = (g_.is_scc_slot(s) || g_.is_scc_slot(t)) && left > 0 ? DeleteCase::kMultiplicity
                                                                       : DeleteCase::kDagEdge;
      return out;
    }
    g_.remove_input_edge(us, vs);
    auto comps = extract_components(us, vs, s);
    if (comps.empty()) {
      out.kind = DeleteCase::kIntraIntact;
      return out;
    }
    const Label old = labels_.label(s);
    const std::vector<Slot> clist = g_.split_component(s, comps, vs);
    labels_.relabel_split(g_, clist, old);
    out.kind = DeleteCase::kSplit;
    out.components.reserve(clist.size());
    for (Slot c : clist) out.components.push_back(g_.ref_of(c));
    return out;
  }

  /// Adds node `u` with the given out- and in-neighbours. Self references
  /// and repeated neighbours are ignored.
  void insert_node(NodeId u, std::span<const NodeId> out_nodes, std::span<const NodeId> in_nodes) {
    if (g_.has_input(u)) throw InputError("node " + std::to_string(u) + " already exists");
    for (NodeId w : out_nodes) {
      if (w != u) g_.input_slot(w);
    }
    for (NodeId w : in_nodes) {
      if (w != u) g_.input_slot(w);
    }
    const Slot us = g_.add_input_node(u);
    labels_.reserve_slots(g_.slot_count());
    std::vector<Slot> targets;
    for (NodeId w : out_nodes) {
      if (w == u) continue;
      const Slot ws = g_.input_slot(w);
      if (!g_.add_input_edge(us, ws)) continue;
      const Slot tw = g_.find(ws);
      g_.add_dag_edge(us, tw, 1);
      targets.push_back(tw);
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    labels_.label_new_node(us, targets);
    for (NodeId w : in_nodes) {
      if (w != u) insert_edge(w, u);
    }
  }

  void delete_node(NodeId u) {
    const Slot us = g_.input_slot(u);
    const std::vector<Slot> outs(g_.input().out(us).begin(), g_.input().out(us).end());
    for (Slot w : outs) delete_edge(u, g_.ref_of(w).id);
    if (g_.find(us) != us) throw InvariantViolation("delete_node: node still inside a component");
    const std::vector<Slot> ins(g_.input().in(us).begin(), g_.input().in(us).end());
    for (Slot p : ins) {
      g_.remove_dag_edge(g_.find(p), us, 1);
      g_.remove_input_edge(p, us);
    }
    g_.remove_input_node(u);
  }

  /// Applies one update. Queries are answered and otherwise ignored.
  void apply(const UpdateOp& op) {
    std::visit(
        [this](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, op::InsertEdge>) {
            insert_edge(o.u, o.v);
          } else if constexpr (std::is_same_v<T, op::DeleteEdge>) {
            delete_edge(o.u, o.v);
          } else if constexpr (std::is_same_v<T, op::InsertNode>) {
            insert_node(o.u, o.out, o.in);
          } else if constexpr (std::is_same_v<T, op::DeleteNode>) {
            delete_node(o.u);
          } else {
            reachable(o.u, o.v);
          }
        },
        op);
  }

  /// Applies a batch of edge insertions and deletions.
  ///
  /// Complementary insert/delete pairs on the same edge cancel first. The
  /// surviving operations are then applied by category, each classified
  /// against the index state right before its pass: insertions inside a
  /// component, deletions between components, insertions between components
  /// (sharing one label propagation), and finally deletions inside a
  /// component, one at a time. Returns the number of surviving operations.
  std::size_t apply_batch(std::span<const UpdateOp> ops) {
    struct Edge {
      NodeId u;
      NodeId v;
      bool insert;
    };
    struct Key {
      NodeId u;
      NodeId v;
      bool operator==(const Key&) const = default;
    };
    struct KeyHash {
      std::size_t operator()(const Key& k) const noexcept {
        return std::hash<std::uint64_t>{}((std::uint64_t{k.u} << 32) | k.v);
      }
    };

    std::vector<Edge> edges;
    edges.reserve(ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (const auto* ins = std::get_if<op::InsertEdge>(&ops[i])) {
        edges.push_back({ins->u, ins->v, true});
      } else if (const auto* del = std::get_if<op::DeleteEdge>(&ops[i])) {
        edges.push_back({del->u, del->v, false});
      } else {
        throw InputError("batch op " + std::to_string(i) + " is not an edge insertion or deletion");
      }
      g_.input_slot(edges.back().u);
      g_.input_slot(edges.back().v);
    }

    // Cancel complementary pairs with a per-edge stack of pending positions.
    std::unordered_map<Key, std::vector<std::size_t>, KeyHash> open;
    std::vector<std::uint8_t> alive(edges.size(), 1);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      auto& stack = open[Key{edges[i].u, edges[i].v}];
      if (!stack.empty() && edges[stack.back()].insert != edges[i].insert) {
        alive[stack.back()] = 0;
        alive[i] = 0;
        stack.pop_back();
      } else {
        stack.push_back(i);
      }
    }
    std::vector<Edge> inserts;
    std::vector<Edge> deletes;
    for (const auto& [key, stack] : open) {
      if (stack.size() > 1 && !edges[stack.front()].insert) {
        throw InputError("batch deletes edge (" + std::to_string(key.u) + "," + std::to_string(key.v) +
                         ") more than once");
      }
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!alive[i]) continue;
      const Edge& e = edges[i];
      if (e.insert) {
        inserts.push_back(e);
      } else {
        if (e.u != e.v && !g_.input().has_edge(g_.input_slot(e.u), g_.input_slot(e.v))) {
          throw InputError("batch deletes missing edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
        }
        deletes.push_back(e);
      }
    }
    const std::size_t survivors = inserts.size() + deletes.size();

    auto endpoints = [this](const Edge& e) {
      return std::pair{g_.input_slot(e.u), g_.input_slot(e.v)};
    };

    // Insertions inside a component touch only the input graph.
    std::vector<Edge> rest;
    for (const Edge& e : inserts) {
      const auto [us, vs] = endpoints(e);
      if (us == vs) continue;
      if (classify(e.u, e.v, true) == UpdateClass::kInsertIntra) {
        g_.add_input_edge(us, vs);
      } else {
        rest.push_back(e);
      }
    }
    inserts.swap(rest);
    rest.clear();

    // Deletions between components: multiplicity bookkeeping only.
    for (const Edge& e : deletes) {
      const auto [us, vs] = endpoints(e);
      if (us == vs) continue;
      if (classify(e.u, e.v, false) == UpdateClass::kDeleteInter) {
        delete_edge(e.u, e.v);
      } else {
        rest.push_back(e);
      }
    }
    deletes.swap(rest);

    // Insertions between components. New DAG edges are recorded without label
    // changes and repaired together; a merge check has to account for them.
    pending_.clear();
    for (const Edge& e : inserts) {
      const auto [us, vs] = endpoints(e);
      if (g_.input().has_edge(us, vs)) continue;
      const Slot s = g_.find(us);
      const Slot t = g_.find(vs);
      if (s == t) {
        g_.add_input_edge(us, vs);
      } else if (g_.multiplicity(s, t) > 0) {
        g_.add_input_edge(us, vs);
        g_.add_dag_edge(s, t, 1);
      } else if (!reach_with_pending(t, s)) {
        g_.add_input_edge(us, vs);
        g_.add_dag_edge(s, t, 1);
        pending_.emplace_back(s, t);
      } else {
        flush_pending();
        insert_edge(e.u, e.v);
      }
    }
    flush_pending();

    // Deletions inside a component, individually.
    for (const Edge& e : deletes) delete_edge(e.u, e.v);
    return survivors;
  }

  // ------------------------------------------------------- building blocks

  /// Current DAG nodes on some path from `t` to `s`, `s` first and `t` last,
  /// every node after its successors on such paths. Children whose label
  /// cannot contain L_s are never entered.
  std::vector<Slot> collect_merge_list(Slot t, Slot s) {
    constexpr std::uint8_t kActive = 1;
    constexpr std::uint8_t kNo = 2;
    constexpr std::uint8_t kYes = 3;
    struct Frame {
      DaggerGraph::Cursor cur;
      bool yes;
    };
    std::vector<Slot> list;
    merge_state_.next();
    std::vector<Frame> frames;
    merge_state_.set(t, kActive);
    frames.push_back({DaggerGraph::Cursor{t}, false});
    merge_trace_.assign(1, t);
    Slot c;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (g_.next_child(f.cur, c)) {
        if (c == s) {
          f.yes = true;
          if (merge_state_.get(s) != kYes) {
            merge_state_.set(s, kYes);
            list.push_back(s);
          }
          continue;
        }
        const std::uint8_t st = merge_state_.get(c);
        if (st == kYes) {
          f.yes = true;
        } else if (st == kActive) {
          throw InvariantViolation("collect_merge_list: DAG has a cycle");
        } else if (st == 0 && labels_.subsumes(c, s)) {
          merge_state_.set(c, kActive);
          merge_trace_.push_back(c);
          frames.push_back({DaggerGraph::Cursor{c}, false});
        }
        continue;
      }
      const Frame done = f;
      frames.pop_back();
      merge_state_.set(done.cur.node, done.yes ? kYes : kNo);
      if (done.yes) {
        list.push_back(done.cur.node);
        if (!frames.empty()) frames.back().yes = true;
      }
    }
    if (list.empty() || list.back() != t) throw std::logic_error("collect_merge_list: t does not reach s");
    return list;
  }

  /// DAG nodes entered by the most recent collect_merge_list, in order,
  /// starting with t.
  const std::vector<Slot>& last_merge_trace() const { return merge_trace_; }

  /// After removing input edge (u,v) inside component `s`, finds the parts
  /// of `s` that can no longer reach `v`, grouped into their strongly
  /// connected components in discovery order. Empty when u still reaches v.
  ///
  /// The search is a Tarjan traversal confined to `s`, started at `u` and
  /// restarted from in-component parents of each confirmed component. A
  /// traversal that reaches `v` (or a node known to reach it) stops and
  /// marks its whole stack as reaching `v`.
  std::vector<std::vector<Slot>> extract_components(Slot u, Slot v, Slot s) {
    if (g_.find(u) != s || g_.find(v) != s) throw std::logic_error("extract_components: endpoints not in component");
    constexpr std::uint32_t kReaches = std::numeric_limits<std::uint32_t>::max();
    constexpr std::uint32_t kAssigned = kReaches - 1;
    // index_ holds the DFS number, kAssigned once in a component, or kReaches.
    index_.next();
    low_.next();
    on_stack_.next();
    enqueued_.next();
    extract_trace_.clear();
    std::vector<std::vector<Slot>> comps;
    std::deque<Slot> queue{u};
    enqueued_.set(u);
    index_.set(v, kReaches);
    std::vector<Slot> stack;
    struct Frame {
      Slot node;
      std::uint32_t next;
    };
    std::vector<Frame> frames;
    std::uint32_t counter = 0;

    while (!queue.empty()) {
      const Slot root = queue.front();
      queue.pop_front();
      if (index_.has(root)) continue;
      auto open = [&](Slot x) {
        index_.set(x, counter);
        low_.set(x, counter);
        ++counter;
        extract_trace_.push_back(x);
        on_stack_.set(x);
        stack.push_back(x);
        frames.push_back({x, 0});
      };
      open(root);
      bool aborted = false;
      while (!frames.empty()) {
        Frame& f = frames.back();
        const auto out = g_.input().out(f.node);
        if (f.next < out.size()) {
          const Slot y = out[f.next++];
          if (!index_.has(y)) {
            if (g_.find(y) != s) continue;
            open(y);
            continue;
          }
          const std::uint32_t iy = index_.get(y);
          if (iy == kReaches) {
            aborted = true;
            break;
          }
          if (iy != kAssigned && on_stack_.test(y)) low_.set(f.node, std::min(low_.get(f.node), iy));
          continue;
        }
        const Slot x = f.node;
        frames.pop_back();
        if (!frames.empty()) {
          const Slot p = frames.back().node;
          low_.set(p, std::min(low_.get(p), low_.get(x)));
        }
        if (low_.get(x) != index_.get(x)) continue;
        auto& comp = comps.emplace_back();
        Slot w;
        do {
          w = stack.back();
          stack.pop_back();
          comp.push_back(w);
        } while (w != x);
        for (Slot m : comp) index_.set(m, kAssigned);
        for (Slot m : comp) {
          for (Slot p : g_.input().in(m)) {
            if (enqueued_.test(p) || index_.has(p) || g_.find(p) != s) continue;
            enqueued_.set(p);
            queue.push_back(p);
          }
        }
      }
      if (aborted) {
        for (Slot x : stack) index_.set(x, kReaches);
        stack.clear();
        frames.clear();
        if (root == u) return {};
      }
    }
    return comps;
  }

  /// Input nodes opened by the most recent extract_components, in order.
  const std::vector<Slot>& last_extract_trace() const { return extract_trace_; }

 private:
  // Does `t` reach `s` once the pending DAG edges are taken into account?
  // Labels are only trusted along edges that predate the pending ones, so
  // paths are stitched together from pruned searches ending at a pending
  // edge's tail.
  bool reach_with_pending(Slot t, Slot s) {
    if (search_.run(g_, labels_, t, s)) return true;
    if (pending_.empty()) return false;
    std::vector<Slot> frontier{t};
    std::vector<std::uint8_t> used(pending_.size(), 0);
    while (!frontier.empty()) {
      const Slot x = frontier.back();
      frontier.pop_back();
      for (std::size_t i = 0; i < pending_.size(); ++i) {
        if (used[i]) continue;
        const auto [a, b] = pending_[i];
        if (!search_.run(g_, labels_, x, a)) continue;
        used[i] = 1;
        if (search_.run(g_, labels_, b, s)) return true;
        frontier.push_back(b);
      }
    }
    return false;
  }

  void flush_pending() {
    if (pending_.empty()) return;
    labels_.cover_all(g_, pending_);
    pending_.clear();
  }

  DaggerGraph g_;
  LabelStore labels_;
  PrunedSearch search_;
  EpochArray<std::uint8_t> merge_state_;
  EpochArray<std::uint32_t> index_;
  EpochArray<std::uint32_t> low_;
  EpochMarks on_stack_;
  EpochMarks enqueued_;
  std::vector<std::pair<Slot, Slot>> pending_;
  std::vector<Slot> merge_trace_;
  std::vector<Slot> extract_trace_;
};

}  // namespace dagger
