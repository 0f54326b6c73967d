#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "dagger/digraph.hpp"

namespace dagger {

struct SccPartition {
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  /// Component index per node id; kNone for absent ids.
  std::vector<std::uint32_t> component;
  /// Members of each component, in the order Tarjan completes them
  /// (reverse topological order of the condensation).
  std::vector<std::vector<Digraph::Id>> members;
};

/// Iterative Tarjan over every present node of `g`.
inline SccPartition tarjan_scc(const Digraph& g) {
  using Id = Digraph::Id;
  constexpr std::uint32_t kUnvisited = SccPartition::kNone;
  const std::size_t bound = g.id_bound();

  SccPartition result;
  result.component.assign(bound, SccPartition::kNone);
  std::vector<std::uint32_t> index(bound, kUnvisited);
  std::vector<std::uint32_t> low(bound, 0);
  std::vector<std::uint8_t> on_stack(bound, 0);
  std::vector<Id> stack;
  struct Frame {
    Id node;
    std::uint32_t next;
  };
  std::vector<Frame> frames;
  std::uint32_t counter = 0;

  for (Id root = 0; root < bound; ++root) {
    if (!g.has_node(root) || index[root] != kUnvisited) continue;
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    frames.push_back({root, 0});
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto out = g.out(f.node);
      if (f.next < out.size()) {
        const Id w = out[f.next++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      const Id v = f.node;
      frames.pop_back();
      if (!frames.empty()) {
        Id parent = frames.back().node;
        low[parent] = std::min(low[parent], low[v]);
      }
      if (low[v] != index[v]) continue;
      const auto comp = static_cast<std::uint32_t>(result.members.size());
      auto& members = result.members.emplace_back();
      Id w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        result.component[w] = comp;
        members.push_back(w);
      } while (w != v);
    }
  }
  return result;
}

}  // namespace dagger
