#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "dagger/dagger_graph.hpp"
#include "dagger/digraph.hpp"
#include "dagger/labeling.hpp"
#include "dagger/scratch.hpp"

namespace dagger {

struct QueryStats {
  /// DAG nodes entered by the search, the start node included.
  std::size_t visited = 0;
  /// Children skipped because their label cannot contain the target's.
  std::size_t pruned = 0;

  QueryStats& operator+=(const QueryStats& o) {
    visited += o.visited;
    pruned += o.pruned;
    return *this;
  }
};

/// Depth-first search over the DAG that skips every child whose label does
/// not subsume the target's label. With k == 0 nothing is skipped and this
/// is a plain DAG search. Children are visited in stored adjacency order.
///
/// Scratch space is reused across calls; visited marks are invalidated by a
/// generation bump instead of clearing.
class PrunedSearch {
 public:
  bool run(const DaggerGraph& g, const LabelStore& labels, Slot s, Slot t, QueryStats* stats = nullptr) {
    QueryStats local;
    const bool found = search(g, labels, s, t, local);
    if (stats) *stats += local;
    return found;
  }

 private:
  bool search(const DaggerGraph& g, const LabelStore& labels, Slot s, Slot t, QueryStats& st) {
    st.visited = 1;
    if (s == t) return true;
    if (!labels.subsumes(s, t)) return false;
    seen_.next();
    seen_.set(s);
    stack_.clear();
    stack_.push_back(DaggerGraph::Cursor{s});
    Slot c;
    while (!stack_.empty()) {
      if (!g.next_child(stack_.back(), c)) {
        stack_.pop_back();
        continue;
      }
      if (c == t) return true;
      if (seen_.test(c)) continue;
      seen_.set(c);
      if (!labels.subsumes(c, t)) {
        ++st.pruned;
        continue;
      }
      ++st.visited;
      stack_.push_back(DaggerGraph::Cursor{c});
    }
    return false;
  }

  EpochMarks seen_;
  std::vector<DaggerGraph::Cursor> stack_;
};

/// Plain depth-first search on a Digraph with reusable scratch space.
class GraphSearch {
 public:
  bool run(const Digraph& g, Digraph::Id u, Digraph::Id v) {
    if (!g.has_node(u)) throw InputError("unknown node " + std::to_string(u));
    if (!g.has_node(v)) throw InputError("unknown node " + std::to_string(v));
    if (u == v) return true;
    seen_.next();
    seen_.set(u);
    stack_.assign(1, u);
    while (!stack_.empty()) {
      const Digraph::Id x = stack_.back();
      stack_.pop_back();
      for (Digraph::Id y : g.out(x)) {
        if (y == v) return true;
        if (seen_.test(y)) continue;
        seen_.set(y);
        stack_.push_back(y);
      }
    }
    return false;
  }

 private:
  EpochMarks seen_;
  std::vector<Digraph::Id> stack_;
};

/// Reachability on the input graph alone, with no index.
inline bool dfs_input(const Digraph& g, Digraph::Id u, Digraph::Id v) {
  GraphSearch search;
  return search.run(g, u, v);
}

/// Reachability between input ids of a layered graph using only its input
/// adjacency.
inline bool dfs_input(const DaggerGraph& g, NodeId u, NodeId v) {
  return dfs_input(g.input(), g.input_slot(u), g.input_slot(v));
}

/// Unpruned search over DAG edges, implicit singleton edges included.
inline bool dfs_dag(const DaggerGraph& g, Slot s, Slot t) {
  if (!g.is_dag_node(s) || !g.is_dag_node(t)) throw std::logic_error("dfs_dag: not a current DAG node");
  if (s == t) return true;
  std::vector<std::uint8_t> seen(g.slot_count(), 0);
  std::vector<Slot> stack{s};
  seen[s] = 1;
  while (!stack.empty()) {
    const Slot x = stack.back();
    stack.pop_back();
    bool found = false;
    g.for_each_child(x, [&](Slot c) {
      if (found || seen[c]) return;
      if (c == t) found = true;
      seen[c] = 1;
      stack.push_back(c);
    });
    if (found) return true;
  }
  return false;
}

}  // namespace dagger
