#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dagger/error.hpp"

namespace dagger {

/// Mutable directed graph over dense integer ids with set semantics on edges.
///
/// Node ids index directly into the adjacency arrays, so ids may be sparse
/// (holes are simply absent nodes). Self-loops are never stored; they cannot
/// change reachability between distinct nodes.
class Digraph {
 public:
  using Id = std::uint32_t;

  Digraph() = default;
  explicit Digraph(std::size_t node_count) { reserve_ids(node_count, true); }

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edge_count_; }
  /// One past the largest id ever allocated.
  std::size_t id_bound() const { return present_.size(); }

  bool has_node(Id u) const { return u < present_.size() && present_[u]; }

  /// Returns false if the node already exists.
  bool add_node(Id u) {
    if (u >= present_.size()) reserve_ids(std::size_t{u} + 1, false);
    if (present_[u]) return false;
    present_[u] = 1;
    ++node_count_;
    return true;
  }

  /// Removes the node together with its incident edges.
  void remove_node(Id u) {
    require(u);
    for (Id v : out_[u]) erase_one(in_[v], u);
    for (Id p : in_[u]) erase_one(out_[p], u);
    edge_count_ -= out_[u].size() + in_[u].size();
    out_[u].clear();
    in_[u].clear();
    present_[u] = 0;
    --node_count_;
  }

  bool has_edge(Id u, Id v) const {
    if (!has_node(u) || !has_node(v)) return false;
    // Scan whichever side is shorter.
    if (out_[u].size() <= in_[v].size()) {
      return std::find(out_[u].begin(), out_[u].end(), v) != out_[u].end();
    }
    return std::find(in_[v].begin(), in_[v].end(), u) != in_[v].end();
  }

  /// Inserts (u,v). Returns false for duplicates and self-loops.
  bool add_edge(Id u, Id v) {
    require(u);
    require(v);
    if (u == v || has_edge(u, v)) return false;
    out_[u].push_back(v);
    in_[v].push_back(u);
    ++edge_count_;
    return true;
  }

  /// Removes (u,v). Returns false if the edge was absent.
  bool remove_edge(Id u, Id v) {
    require(u);
    require(v);
    if (!erase_one(out_[u], v)) return false;
    erase_one(in_[v], u);
    --edge_count_;
    return true;
  }

  std::span<const Id> out(Id u) const { return out_[u]; }
  std::span<const Id> in(Id u) const { return in_[u]; }

 private:
  void reserve_ids(std::size_t bound, bool present) {
    const std::size_t old = present_.size();
    if (bound <= old) return;
    present_.resize(bound, 0);
    out_.resize(bound);
    in_.resize(bound);
    if (present) {
      for (std::size_t i = old; i < bound; ++i) present_[i] = 1;
      node_count_ += bound - old;
    }
  }

  void require(Id u) const {
    if (!has_node(u)) throw InputError("unknown node " + std::to_string(u));
  }

  // Order-preserving erase so adjacency order stays the insertion order.
  static bool erase_one(std::vector<Id>& list, Id x) {
    auto it = std::find(list.begin(), list.end(), x);
    if (it == list.end()) return false;
    list.erase(it);
    return true;
  }

  std::vector<std::vector<Id>> out_;
  std::vector<std::vector<Id>> in_;
  std::vector<std::uint8_t> present_;
  std::size_t node_count_ = 0;
  std::size_t edge_count_ = 0;
};

}  // namespace dagger
