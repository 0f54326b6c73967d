#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dagger/dagger_graph.hpp"
#include "dagger/error.hpp"
#include "dagger/scratch.hpp"

namespace dagger {

using Rank = std::uint64_t;

/// One dimension of a label: [b, e] with b < e.
struct Interval {
  Rank b = 0;
  Rank e = 0;
  friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

/// k intervals; k == 0 disables labeling.
using Label = std::vector<Interval>;

/// True iff every dimension of `inner` lies inside the matching dimension of
/// `outer`. With k == 0 there is nothing to refute, so the answer is true.
inline bool subsumes(const Label& outer, const Label& inner) {
  if (outer.size() != inner.size()) throw std::logic_error("subsumes: label dimension mismatch");
  for (std::size_t i = 0; i < outer.size(); ++i) {
    if (outer[i].b > inner[i].b || inner[i].e > outer[i].e) return false;
  }
  return true;
}

/// Order in which a traversal visits children and roots. Anything other than
/// kShuffled exists to replay hand-worked examples.
enum class ChildOrder : std::uint8_t {
  kShuffled,  // independent random order per dimension
  kStored,    // adjacency order
  kReversed,  // reverse adjacency order
  kRanked,    // ascending LabelerConfig::rank, ties in adjacency order
};

struct LabelerConfig {
  std::size_t k = 2;
  std::uint64_t seed = 0;
  ChildOrder order = ChildOrder::kShuffled;
  /// Per-slot priority used by ChildOrder::kRanked; missing slots go last.
  std::vector<std::uint32_t> rank{};
};

/// SplitMix64 finalizer, used to derive independent per-dimension seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Interval labels for the current DAG nodes of a DaggerGraph.
///
/// Every completed update leaves the store satisfying, for each DAG edge
/// (s,t) and dimension i, b_s <= b_t and e_s >= e_t + 1. Reachability
/// therefore implies subsumption and a failed subsumption test proves
/// non-reachability.
class LabelStore {
 public:
  explicit LabelStore(LabelerConfig cfg = {}) : cfg_(cfg) {
    rngs_.reserve(cfg_.k);
    for (std::size_t i = 0; i < cfg_.k; ++i) rngs_.emplace_back(mix_seed(cfg_.seed + i));
    max_end_.assign(cfg_.k, 0);
  }

  std::size_t k() const { return cfg_.k; }
  const LabelerConfig& config() const { return cfg_; }

  void reserve_slots(std::size_t slots) {
    if (slots * cfg_.k > ranks_.size()) ranks_.resize(slots * cfg_.k);
  }

  const Interval& at(Slot s, std::size_t dim) const { return ranks_[std::size_t{s} * cfg_.k + dim]; }

  Label label(Slot s) const {
    const auto* first = ranks_.data() + std::size_t{s} * cfg_.k;
    return Label(first, first + cfg_.k);
  }

  void assign(Slot s, const Label& l) {
    if (l.size() != cfg_.k) throw std::logic_error("assign: label dimension mismatch");
    reserve_slots(std::size_t{s} + 1);
    for (std::size_t i = 0; i < cfg_.k; ++i) {
      set_b(s, i, l[i].b);
      set_e(s, i, l[i].e);
    }
  }

  bool subsumes(Slot outer, Slot inner) const {
    for (std::size_t i = 0; i < cfg_.k; ++i) {
      const Interval& o = at(outer, i);
      const Interval& n = at(inner, i);
      if (o.b > n.b || n.e > o.e) return false;
    }
    return true;
  }

  /// Largest end value ever assigned in dimension `dim` (0 when empty).
  Rank max_end(std::size_t dim) const { return max_end_[dim]; }

  /// Count of single-rank writes made by ancestor propagation.
  std::size_t propagation_writes() const { return propagation_writes_; }

  /// k randomized post-order traversals of the whole DAG. The counter grows
  /// by size(s) when leaving s; e_s is the counter at exit and b_s is the
  /// smaller of the entry counter and the children's b.
  void initial_labels(const DaggerGraph& g) {
    reserve_slots(g.slot_count());
    std::fill(max_end_.begin(), max_end_.end(), 0);
    if (cfg_.k == 0) return;
    const std::vector<Slot> nodes = g.dag_nodes();
    std::vector<Slot> roots;
    for (Slot s : nodes) {
      DaggerGraph::Cursor c{s};
      Slot p;
      if (!g.next_parent(c, p)) roots.push_back(s);
    }
    auto everywhere = [](Slot) { return true; };
    for (std::size_t dim = 0; dim < cfg_.k; ++dim) {
      std::vector<Slot> order = roots;
      arrange(order.begin(), order.end(), dim);
      state_.next();
      Rank ctr = 0;
      std::size_t visited = 0;
      std::size_t leaves = 0;
      for (Slot r : order) traverse(g, dim, r, ctr, everywhere, visited, leaves);
      if (visited != nodes.size()) throw InvariantViolation("initial_labels: DAG has a cycle");
    }
  }

  /// Makes L_s cover L_t after the DAG edge (s,t) appears, then repairs the
  /// ancestors of s.
  void enlarge_to_cover(const DaggerGraph& g, Slot s, Slot t) {
    if (!g.is_dag_node(s) || !g.is_dag_node(t)) throw std::logic_error("enlarge_to_cover: expired node");
    if (cover(s, t)) {
      const Slot seed[] = {s};
      propagate_up(g, seed);
    }
  }

  /// Covers several new DAG edges at once with a single propagation pass.
  void cover_all(const DaggerGraph& g, std::span<const std::pair<Slot, Slot>> edges) {
    std::vector<Slot> changed;
    for (const auto& [s, t] : edges) {
      if (!g.is_dag_node(s) || !g.is_dag_node(t)) throw std::logic_error("cover_all: expired node");
      if (cover(s, t)) changed.push_back(s);
    }
    if (!changed.empty()) propagate_up(g, changed);
  }

  /// Restores edge-wise containment above `changed`, whose labels may have
  /// grown. Per dimension, begin values flow upward smallest-first; end
  /// values are fixed in increasing order of the ancestors' previous end, so
  /// a node is normally finalized only after all its enlarged children.
  void propagate_up(const DaggerGraph& g, std::span<const Slot> changed) {
    using Item = std::pair<Rank, Slot>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (std::size_t dim = 0; dim < cfg_.k; ++dim) {
      for (Slot x : changed) heap.emplace(at(x, dim).b, x);
      while (!heap.empty()) {
        const auto [bx, x] = heap.top();
        heap.pop();
        if (bx != at(x, dim).b) continue;
        g.for_each_parent(x, [&](Slot p) {
          if (at(p, dim).b > bx) {
            set_b(p, dim, bx);
            ++propagation_writes_;
            heap.emplace(bx, p);
          }
        });
      }

      required_.next();
      auto demand = [&](Slot p, Rank end) {
        if (at(p, dim).e >= end || required_.get(p) >= end) return;
        required_.set(p, end);
        heap.emplace(at(p, dim).e, p);
      };
      for (Slot x : changed) {
        const Rank need = at(x, dim).e + 1;
        g.for_each_parent(x, [&](Slot p) { demand(p, need); });
      }
      while (!heap.empty()) {
        const Slot p = heap.top().second;
        heap.pop();
        const Rank need = required_.get(p);
        if (need <= at(p, dim).e) continue;
        set_e(p, dim, need);
        ++propagation_writes_;
        g.for_each_parent(p, [&](Slot q) { demand(q, need + 1); });
      }
    }
  }

  /// Relabels the DAG nodes produced by a component split.
  ///
  /// `clist` holds the new components with the surviving component last; it
  /// must form a sub-DAG whose single root is that last node. Traversals
  /// restricted to `clist` restart the counter at the old begin value and
  /// end each node at max(counter, largest child end + 1). Ancestors outside
  /// `clist` are then enlarged where needed.
  void relabel_split(const DaggerGraph& g, std::span<const Slot> clist, const Label& old_label) {
    if (clist.empty()) throw std::logic_error("relabel_split: empty component list");
    if (old_label.size() != cfg_.k) throw std::logic_error("relabel_split: label dimension mismatch");
    reserve_slots(g.slot_count());
    inside_.next();
    for (Slot s : clist) {
      if (!g.is_dag_node(s)) throw std::logic_error("relabel_split: expired node in list");
      inside_.set(s);
    }
    if (cfg_.k == 0) return;
    auto in_list = [this](Slot s) { return inside_.test(s); };
    const Slot root = clist.back();
    for (std::size_t dim = 0; dim < cfg_.k; ++dim) {
      state_.next();
      Rank ctr = old_label[dim].b;
      std::size_t visited = 0;
      std::size_t leaves = 0;
      traverse(g, dim, root, ctr, in_list, visited, leaves);
      if (visited != clist.size()) throw std::logic_error("relabel_split: list has more than one root");
      if (leaves != 1) throw std::logic_error("relabel_split: list has more than one leaf");
    }
    propagate_up(g, clist);
  }

  /// Label of a freshly inserted lone node from the components it points to.
  void label_new_node(Slot u, std::span<const Slot> out_components) {
    reserve_slots(std::size_t{u} + 1);
    for (std::size_t dim = 0; dim < cfg_.k; ++dim) {
      Rank b = 0;
      Rank e = 0;
      if (out_components.empty()) {
        b = max_end_[dim];
        e = b + 1;
      } else {
        b = at(out_components.front(), dim).b;
        for (Slot w : out_components) {
          b = std::min(b, at(w, dim).b);
          e = std::max(e, at(w, dim).e);
        }
        e += 1;
      }
      set_b(u, dim, b);
      set_e(u, dim, e);
    }
  }

 private:
  // Widens L_s to cover L_t in every dimension; returns whether it changed.
  bool cover(Slot s, Slot t) {
    bool changed = false;
    for (std::size_t dim = 0; dim < cfg_.k; ++dim) {
      const Interval& ti = at(t, dim);
      const Interval si = at(s, dim);
      if (ti.b < si.b) {
        set_b(s, dim, ti.b);
        changed = true;
      }
      if (ti.e + 1 > si.e) {
        set_e(s, dim, ti.e + 1);
        changed = true;
      }
    }
    return changed;
  }

  void set_b(Slot s, std::size_t dim, Rank v) { ranks_[std::size_t{s} * cfg_.k + dim].b = v; }
  void set_e(Slot s, std::size_t dim, Rank v) {
    ranks_[std::size_t{s} * cfg_.k + dim].e = v;
    max_end_[dim] = std::max(max_end_[dim], v);
  }

  template <class It>
  void arrange(It first, It last, std::size_t dim) {
    switch (cfg_.order) {
      case ChildOrder::kShuffled:
        std::shuffle(first, last, rngs_[dim]);
        break;
      case ChildOrder::kReversed:
        std::reverse(first, last);
        break;
      case ChildOrder::kRanked:
        std::stable_sort(first, last, [this](Slot a, Slot b) { return rank_of(a) < rank_of(b); });
        break;
      case ChildOrder::kStored:
        break;
    }
  }

  std::uint32_t rank_of(Slot s) const {
    return s < cfg_.rank.size() ? cfg_.rank[s] : std::numeric_limits<std::uint32_t>::max();
  }

  /// Post-order labeling from `root`, descending only into unvisited nodes
  /// accepted by `inside`. Other children contribute their current labels.
  struct Frame {
    Slot node;
    std::size_t begin;
    std::size_t next;
    Rank min_b;
    Rank max_e;
    bool has_child;
    bool has_inner_child;
  };

  template <class Inside>
  void traverse(const DaggerGraph& g, std::size_t dim, Slot root, Rank& ctr, Inside&& inside,
                std::size_t& visited, std::size_t& leaves) {
    constexpr std::uint8_t kActive = 1;
    constexpr std::uint8_t kDone = 2;
    if (state_.has(root)) return;

    auto enter = [&](Slot s) {
      state_.set(s, kActive);
      ++visited;
      const std::size_t begin = children_.size();
      g.for_each_child(s, [&](Slot c) { children_.push_back(c); });
      arrange(children_.begin() + static_cast<std::ptrdiff_t>(begin), children_.end(), dim);
      frames_.push_back(Frame{s, begin, begin, ctr, 0, false, false});
    };
    auto fold = [&](Frame& f, Slot c) {
      const Interval& ci = at(c, dim);
      f.min_b = std::min(f.min_b, ci.b);
      f.max_e = std::max(f.max_e, ci.e);
      f.has_child = true;
    };

    enter(root);
    while (!frames_.empty()) {
      Frame& f = frames_.back();
      if (f.next < children_.size()) {
        const Slot c = children_[f.next++];
        if (inside(c)) {
          f.has_inner_child = true;
          const std::uint8_t st = state_.get(c);
          if (st == kActive) throw InvariantViolation("label traversal found a cycle");
          if (st == 0) {
            enter(c);
            continue;
          }
        }
        fold(f, c);
        continue;
      }
      const Frame done = f;
      frames_.pop_back();
      children_.resize(done.begin);
      ctr += g.size(done.node);
      const Rank e = done.has_child ? std::max(ctr, done.max_e + 1) : ctr;
      set_b(done.node, dim, done.min_b);
      set_e(done.node, dim, e);
      state_.set(done.node, kDone);
      if (!done.has_inner_child) ++leaves;
      if (!frames_.empty()) fold(frames_.back(), done.node);
    }
  }

  LabelerConfig cfg_;
  std::vector<Interval> ranks_;
  std::vector<Rank> max_end_;
  std::vector<std::mt19937_64> rngs_;
  std::size_t propagation_writes_ = 0;

  EpochArray<std::uint8_t> state_;
  EpochArray<Rank> required_;
  EpochMarks inside_;
  std::vector<Frame> frames_;
  std::vector<Slot> children_;
};

}  // namespace dagger
