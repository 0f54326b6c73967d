#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dagger/digraph.hpp"
#include "dagger/edge_bag.hpp"
#include "dagger/error.hpp"
#include "dagger/scratch.hpp"
#include "dagger/tarjan.hpp"

namespace dagger {

using NodeId = std::uint32_t;
/// Dense internal handle shared by input nodes and SCC nodes.
using Slot = std::uint32_t;
inline constexpr Slot kNoSlot = std::numeric_limits<Slot>::max();

/// Input nodes are named by caller ids; SCC nodes by a serial that is never
/// reused. The (space, id) pair is unique over the layered graph.
enum class NodeSpace : std::uint8_t { kInput, kScc };
enum class NodeKind : std::uint8_t { kInput, kSccCurrent, kSccExpired };

struct NodeRef {
  NodeSpace space = NodeSpace::kInput;
  std::uint32_t id = 0;

  static constexpr NodeRef input(NodeId id) { return {NodeSpace::kInput, id}; }
  static constexpr NodeRef scc(std::uint32_t id) { return {NodeSpace::kScc, id}; }
  constexpr bool is_scc() const { return space == NodeSpace::kScc; }

  friend constexpr auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

inline std::string to_string(NodeRef r) {
  return r.is_scc() ? "#" + std::to_string(r.id) : std::to_string(r.id);
}

struct InputEdge {
  NodeId source;
  NodeId target;
  friend constexpr bool operator==(const InputEdge&, const InputEdge&) = default;
};

/// The layered reachability graph: the input graph, the condensation DAG of
/// current SCCs with per-edge multiplicities, and the containment forest
/// linking every input node to its current SCC.
///
/// A component with a single input node is represented by the input node
/// itself. A DAG edge is stored in the edge bags only when at least one
/// endpoint is a multi-node SCC; between two singletons the input edge is
/// the DAG edge. The child/parent accessors present both uniformly.
///
/// Lookups compress containment paths, so most "read" operations mutate.
class DaggerGraph {
 public:
  DaggerGraph() = default;

  /// Builds the layered graph for nodes [0, node_count). Duplicate edges and
  /// self-loops are dropped.
  static DaggerGraph build(std::size_t node_count, std::span<const InputEdge> edges) {
    if (node_count >= kNoSlot) throw InputError("node count too large");
    DaggerGraph g;
    g.input_ = Digraph(node_count);
    g.verts_.reserve(node_count);
    g.input_slot_.resize(node_count);
    for (std::size_t u = 0; u < node_count; ++u) {
      g.verts_.push_back(Vertex{NodeSpace::kInput, true, kNoSlot, 1, static_cast<std::uint32_t>(u)});
      g.input_slot_[u] = static_cast<Slot>(u);
    }
    g.dag_out_.resize(node_count);
    g.dag_in_.resize(node_count);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const InputEdge& e = edges[i];
      if (e.source >= node_count || e.target >= node_count) {
        throw InputError("edge " + std::to_string(i) + " (" + std::to_string(e.source) + "," +
                         std::to_string(e.target) + ") references a node outside [0," +
                         std::to_string(node_count) + ")");
      }
      g.input_.add_edge(e.source, e.target);
    }

    const SccPartition scc = tarjan_scc(g.input_);
    g.dag_nodes_ = node_count;
    for (const auto& members : scc.members) {
      if (members.size() < 2) continue;
      const Slot s = g.new_scc_slot(static_cast<std::uint32_t>(members.size()));
      for (Slot m : members) g.verts_[m].link = s;
      g.dag_nodes_ -= members.size() - 1;
    }
    for (Slot u = 0; u < node_count; ++u) {
      const Slot su = g.root_of_fresh(u);
      for (Slot v : g.input_.out(u)) {
        const Slot sv = g.root_of_fresh(v);
        if (su != sv) g.add_dag_edge(su, sv, 1);
      }
    }
    return g;
  }

  // ---------------------------------------------------------------- identity

  bool has_input(NodeId id) const {
    return id < input_slot_.size() && input_slot_[id] != kNoSlot;
  }

  Slot input_slot(NodeId id) const {
    if (!has_input(id)) throw InputError("unknown node " + std::to_string(id));
    return input_slot_[id];
  }

  Slot slot_of(NodeRef r) const {
    if (!r.is_scc()) return input_slot(r.id);
    if (r.id >= scc_slot_.size()) throw InputError("unknown SCC node " + to_string(r));
    return scc_slot_[r.id];
  }

  NodeRef ref_of(Slot s) const {
    const Vertex& v = verts_[s];
    return {v.space, v.ext_id};
  }

  NodeKind kind(NodeRef r) const {
    const Slot s = slot_of(r);
    if (!r.is_scc()) return NodeKind::kInput;
    return verts_[s].live ? NodeKind::kSccCurrent : NodeKind::kSccExpired;
  }

  bool is_scc_slot(Slot s) const { return verts_[s].space == NodeSpace::kScc; }
  bool is_input_slot(Slot s) const { return verts_[s].space == NodeSpace::kInput && verts_[s].live; }
  /// True for current SCCs and for input nodes that are their own component.
  bool is_dag_node(Slot s) const {
    return s < verts_.size() && verts_[s].live && verts_[s].link == kNoSlot;
  }

  std::size_t slot_count() const { return verts_.size(); }
  std::size_t input_node_count() const { return input_.node_count(); }
  std::size_t input_edge_count() const { return input_.edge_count(); }
  std::size_t dag_node_count() const { return dag_nodes_; }
  std::size_t scc_count() const { return scc_slot_.size(); }

  /// Input ids currently present, ascending.
  std::vector<NodeId> input_ids() const {
    std::vector<NodeId> ids;
    ids.reserve(input_.node_count());
    for (NodeId id = 0; id < input_slot_.size(); ++id) {
      if (input_slot_[id] != kNoSlot) ids.push_back(id);
    }
    return ids;
  }

  std::vector<Slot> dag_nodes() const {
    std::vector<Slot> out;
    out.reserve(dag_nodes_);
    for (Slot s = 0; s < verts_.size(); ++s) {
      if (is_dag_node(s)) out.push_back(s);
    }
    return out;
  }

  // -------------------------------------------------------------- components

  /// Follows containment links to the current SCC of `u`, then points every
  /// link on the traversed path directly at it.
  Slot find(Slot u) {
    Slot root = u;
    std::size_t hops = 0;
    while (verts_[root].link != kNoSlot) {
      root = verts_[root].link;
      ++hops;
    }
    while (verts_[u].link != kNoSlot && verts_[u].link != root) {
      const Slot next = verts_[u].link;
      verts_[u].link = root;
      u = next;
    }
    last_find_hops_ = hops;
    return root;
  }

  /// Lookup without path compression.
  Slot find_const(Slot u) const {
    while (verts_[u].link != kNoSlot) u = verts_[u].link;
    return u;
  }

  NodeRef find_scc(NodeRef u) {
    const Slot s = slot_of(u);
    if (!verts_[s].live && verts_[s].link == kNoSlot) {
      throw std::logic_error("find_scc on orphaned expired node " + to_string(u));
    }
    return ref_of(find(s));
  }

  /// Number of containment links followed by the most recent find().
  std::size_t last_find_hops() const { return last_find_hops_; }

  std::uint32_t size(Slot s) const { return verts_[s].size; }
  Slot link(Slot s) const { return verts_[s].link; }

  // ----------------------------------------------------------- input graph

  /// Input adjacency over slots. SCC slots are absent from it.
  const Digraph& input() const { return input_; }

  bool add_input_edge(Slot u, Slot v) { return input_.add_edge(u, v); }
  bool remove_input_edge(Slot u, Slot v) { return input_.remove_edge(u, v); }

  Slot add_input_node(NodeId id) {
    if (has_input(id)) throw InputError("node " + std::to_string(id) + " already exists");
    if (id == std::numeric_limits<NodeId>::max()) throw InputError("node id too large");
    const Slot s = push_vertex(Vertex{NodeSpace::kInput, true, kNoSlot, 1, id});
    input_.add_node(s);
    if (id >= input_slot_.size()) input_slot_.resize(std::size_t{id} + 1, kNoSlot);
    input_slot_[id] = s;
    ++dag_nodes_;
    return s;
  }

  /// Removes an input node that is already a standalone component with no
  /// incident edges.
  void remove_input_node(NodeId id) {
    const Slot s = input_slot(id);
    if (verts_[s].link != kNoSlot || !input_.out(s).empty() || !input_.in(s).empty() ||
        !dag_out_[s].empty() || !dag_in_[s].empty()) {
      throw std::logic_error("remove_input_node: node " + std::to_string(id) + " still attached");
    }
    verts_[s].live = false;
    input_.remove_node(s);
    input_slot_[id] = kNoSlot;
    --dag_nodes_;
  }

  // ------------------------------------------------------------------- DAG

  /// Iteration state over the children (or parents) of one DAG node.
  struct Cursor {
    Slot node;
    std::uint32_t pos = 0;
  };

  bool next_child(Cursor& c, Slot& out) const { return next_neighbor<true>(c, out); }
  bool next_parent(Cursor& c, Slot& out) const { return next_neighbor<false>(c, out); }

  template <class F>
  void for_each_child(Slot s, F&& f) const {
    Cursor c{s};
    Slot t;
    while (next_child(c, t)) f(t);
  }

  template <class F>
  void for_each_parent(Slot s, F&& f) const {
    Cursor c{s};
    Slot t;
    while (next_parent(c, t)) f(t);
  }

  std::vector<NodeRef> dag_children(NodeRef r) const { return neighbors<true>(r); }
  std::vector<NodeRef> dag_parents(NodeRef r) const { return neighbors<false>(r); }

  /// Number of input edges underlying the DAG edge (a,b).
  std::uint32_t multiplicity(Slot a, Slot b) const {
    if (is_scc_slot(a) || is_scc_slot(b)) return dag_out_[a].count(b);
    return input_.has_edge(a, b) ? 1 : 0;
  }

  /// Records `c` more input edges from component `a` to component `b`.
  void add_dag_edge(Slot a, Slot b, std::uint32_t c = 1) {
    if (!is_scc_slot(a) && !is_scc_slot(b)) return;  // carried by the input edge
    dag_out_[a].add(b, c);
    dag_in_[b].add(a, c);
  }

  /// Returns the remaining multiplicity of (a,b).
  std::uint32_t remove_dag_edge(Slot a, Slot b, std::uint32_t c = 1) {
    if (!is_scc_slot(a) && !is_scc_slot(b)) return input_.has_edge(a, b) ? 1 : 0;
    dag_in_[b].subtract(a, c);
    return dag_out_[a].subtract(b, c);
  }

  const EdgeBag& stored_out(Slot s) const { return dag_out_[s]; }
  const EdgeBag& stored_in(Slot s) const { return dag_in_[s]; }

  // -------------------------------------------------------------- mutation

  /// Collapses current DAG nodes into one component and returns its slot.
  ///
  /// The largest member (ties: smallest SCC id) becomes the representative;
  /// when every member is a lone input node a fresh SCC node is created.
  /// Edges among members vanish from the DAG; external edges are re-homed on
  /// the representative with multiplicities summed.
  Slot merge_components(std::span<const Slot> members) {
    if (members.size() < 2) throw std::logic_error("merge_components needs at least two members");
    marks_.next();
    Slot rep = kNoSlot;
    std::uint64_t total = 0;
    for (Slot m : members) {
      if (!is_dag_node(m)) throw std::logic_error("merge_components: member is not a current DAG node");
      if (marks_.test(m)) throw std::logic_error("merge_components: duplicate member");
      marks_.set(m);
      total += verts_[m].size;
      if (!is_scc_slot(m)) continue;
      if (rep == kNoSlot || verts_[m].size > verts_[rep].size ||
          (verts_[m].size == verts_[rep].size && verts_[m].ext_id < verts_[rep].ext_id)) {
        rep = m;
      }
    }
    if (total >= std::numeric_limits<std::uint32_t>::max()) throw std::overflow_error("component too large");
    if (rep == kNoSlot) rep = new_scc_slot(0);

    for (Slot m : members) {
      if (m == rep) continue;
      rehome_stored_edges(m, rep);
      if (is_scc_slot(m)) continue;
      for (Slot v : input_.out(m)) {
        if (verts_[v].link == kNoSlot && !marks_.test(v)) add_dag_edge(rep, v, 1);
      }
      for (Slot p : input_.in(m)) {
        if (verts_[p].link == kNoSlot && !marks_.test(p)) add_dag_edge(p, rep, 1);
      }
    }
    for (Slot m : members) {
      if (m == rep) continue;
      verts_[m].link = rep;
      if (is_scc_slot(m)) verts_[m].live = false;
    }
    verts_[rep].size = static_cast<std::uint32_t>(total);
    dag_nodes_ -= members.size() - 1;
    return rep;
  }

  NodeRef merge_components(std::span<const NodeRef> members) {
    std::vector<Slot> slots;
    slots.reserve(members.size());
    for (NodeRef r : members) slots.push_back(slot_of(r));
    return ref_of(merge_components(std::span<const Slot>(slots)));
  }

  /// Carves `components` (disjoint sets of input slots, all members of the
  /// current SCC `s`) out of `s`. Multi-node components get fresh SCC nodes;
  /// single nodes become their own component. `s` keeps the remaining
  /// members; if only `remnant_member` is left, that input node replaces `s`
  /// and `s` expires.
  ///
  /// Returns the new DAG nodes in the order of `components`, followed by the
  /// node now holding the remainder.
  std::vector<Slot> split_component(Slot s, const std::vector<std::vector<Slot>>& components,
                                    Slot remnant_member) {
    if (!is_scc_slot(s) || !is_dag_node(s)) throw std::logic_error("split_component: not a current SCC");
    enum class Tag : std::uint8_t { kSlot, kComponent, kRemnant };
    struct End {
      Tag tag;
      std::uint32_t value;
    };
    struct Pending {
      End from;
      End to;
    };

    comp_of_.next();
    std::uint64_t extracted = 0;
    for (std::uint32_t i = 0; i < components.size(); ++i) {
      for (Slot x : components[i]) comp_of_.set(x, i);
      extracted += components[i].size();
    }
    if (extracted >= verts_[s].size) throw std::logic_error("split_component: nothing left in the component");

    std::vector<Pending> pending;
    for (std::uint32_t i = 0; i < components.size(); ++i) {
      const End self{Tag::kComponent, i};
      for (Slot x : components[i]) {
        for (Slot y : input_.out(x)) {
          if (comp_of_.has(y)) {
            const std::uint32_t j = comp_of_.get(y);
            if (j != i) pending.push_back({self, {Tag::kComponent, j}});
            continue;
          }
          const Slot ty = find(y);
          if (ty == s) {
            pending.push_back({self, {Tag::kRemnant, 0}});
          } else {
            remove_dag_edge(s, ty, 1);
            pending.push_back({self, {Tag::kSlot, ty}});
          }
        }
        for (Slot p : input_.in(x)) {
          if (comp_of_.has(p)) continue;  // covered from p's side
          const Slot tp = find(p);
          if (tp == s) {
            pending.push_back({{Tag::kRemnant, 0}, self});
          } else {
            remove_dag_edge(tp, s, 1);
            pending.push_back({{Tag::kSlot, tp}, self});
          }
        }
      }
    }

    std::vector<Slot> result(components.size() + 1, kNoSlot);
    for (std::size_t i = 0; i < components.size(); ++i) {
      const auto& comp = components[i];
      if (comp.size() >= 2) {
        const Slot c = new_scc_slot(static_cast<std::uint32_t>(comp.size()));
        for (Slot x : comp) verts_[x].link = c;
        result[i] = c;
      } else {
        verts_[comp.front()].link = kNoSlot;
        result[i] = comp.front();
      }
    }
    dag_nodes_ += components.size();
    verts_[s].size -= static_cast<std::uint32_t>(extracted);

    Slot remnant = s;
    if (verts_[s].size == 1) {
      remnant = remnant_member;
      verts_[remnant].link = kNoSlot;
      verts_[s].live = false;
      marks_.next();
      rehome_stored_edges(s, remnant);
    }
    result.back() = remnant;

    auto resolve = [&](End e) {
      switch (e.tag) {
        case Tag::kSlot:
          return e.value;
        case Tag::kComponent:
          return result[e.value];
        case Tag::kRemnant:
          break;
      }
      return remnant;
    };
    for (const Pending& p : pending) add_dag_edge(resolve(p.from), resolve(p.to), 1);
    return result;
  }

 private:
  struct Vertex {
    NodeSpace space;
    bool live;  // input: present in the graph; SCC: current
    Slot link;  // containment parent
    std::uint32_t size;
    std::uint32_t ext_id;
  };

  Slot push_vertex(const Vertex& v) {
    if (verts_.size() >= kNoSlot - 1) throw std::overflow_error("slot space exhausted");
    const auto s = static_cast<Slot>(verts_.size());
    verts_.push_back(v);
    dag_out_.emplace_back();
    dag_in_.emplace_back();
    return s;
  }

  Slot new_scc_slot(std::uint32_t size) {
    const auto serial = static_cast<std::uint32_t>(scc_slot_.size());
    const Slot s = push_vertex(Vertex{NodeSpace::kScc, true, kNoSlot, size, serial});
    scc_slot_.push_back(s);
    return s;
  }

  // During build every link points straight at the component node.
  Slot root_of_fresh(Slot u) const { return verts_[u].link == kNoSlot ? u : verts_[u].link; }

  /// Moves every stored edge of `from` onto `to`, dropping those whose far
  /// end is marked (a fellow merge member) and normalizing storage for edges
  /// that end up between two lone input nodes.
  void rehome_stored_edges(Slot from, Slot to) {
    for (const auto& e : dag_out_[from]) {
      dag_in_[e.slot].subtract(from, e.count);
      if (e.slot != to && !marks_.test(e.slot)) add_dag_edge(to, e.slot, e.count);
    }
    dag_out_[from].clear();
    for (const auto& e : dag_in_[from]) {
      dag_out_[e.slot].subtract(from, e.count);
      if (e.slot != to && !marks_.test(e.slot)) add_dag_edge(e.slot, to, e.count);
    }
    dag_in_[from].clear();
  }

  template <bool kOut>
  bool next_neighbor(Cursor& c, Slot& out) const {
    std::size_t base = 0;
    if (verts_[c.node].space == NodeSpace::kInput) {
      const auto adj = kOut ? input_.out(c.node) : input_.in(c.node);
      while (c.pos < adj.size()) {
        const Slot v = adj[c.pos++];
        if (verts_[v].link == kNoSlot) {
          out = v;
          return true;
        }
      }
      base = adj.size();
    }
    const EdgeBag& bag = kOut ? dag_out_[c.node] : dag_in_[c.node];
    const std::size_t j = c.pos - base;
    if (j >= bag.size()) return false;
    out = bag[j].slot;
    ++c.pos;
    return true;
  }

  template <bool kOut>
  std::vector<NodeRef> neighbors(NodeRef r) const {
    const Slot s = slot_of(r);
    if (!is_dag_node(s)) throw std::logic_error(to_string(r) + " is not a current DAG node");
    std::vector<NodeRef> out;
    Cursor c{s};
    Slot t;
    while (next_neighbor<kOut>(c, t)) out.push_back(ref_of(t));
    return out;
  }

  std::vector<Vertex> verts_;
  std::vector<EdgeBag> dag_out_;
  std::vector<EdgeBag> dag_in_;
  std::vector<Slot> input_slot_;
  std::vector<Slot> scc_slot_;
  Digraph input_;
  std::size_t dag_nodes_ = 0;
  std::size_t last_find_hops_ = 0;
  EpochMarks marks_;
  EpochArray<std::uint32_t> comp_of_;
};

}  // namespace dagger
