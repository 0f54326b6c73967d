#pragma once

// The running example graph: 19 named nodes, 28 edges, three multi-node
// SCCs {A,B,C}, {D,E,F,G} and {N,O,P,S,T}.
//
// Edge order matters for the hand-traced examples: it fixes adjacency order
// (L lists P before M, C lists I before A, S lists P before N) and therefore
// which nodes the component extraction touches.

#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dagger/index.hpp"
#include "dagger/workload.hpp"

namespace example_graph {

inline constexpr std::array<const char*, 19> kNames = {"R", "A", "B", "C", "D", "E", "F", "G", "H", "I",
                                                       "J", "K", "L", "M", "N", "O", "P", "S", "T"};

inline dagger::NodeId id(const std::string& name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (name == kNames[i]) return static_cast<dagger::NodeId>(i);
  }
  throw std::invalid_argument("no node named " + name);
}

inline dagger::GraphData graph() {
  const char* edges[][2] = {
      {"R", "A"}, {"R", "D"}, {"R", "E"}, {"A", "B"}, {"B", "C"}, {"C", "I"}, {"C", "A"},
      {"D", "E"}, {"F", "D"}, {"D", "G"}, {"E", "F"}, {"G", "F"}, {"B", "H"}, {"G", "J"},
      {"D", "H"}, {"H", "L"}, {"J", "K"}, {"L", "P"}, {"L", "M"}, {"K", "N"}, {"I", "O"},
      {"N", "T"}, {"O", "T"}, {"P", "T"}, {"T", "S"}, {"S", "P"}, {"S", "N"}, {"S", "O"},
  };
  dagger::GraphData g{kNames.size(), {}};
  for (const auto& e : edges) g.edges.push_back({id(e[0]), id(e[1])});
  return g;
}

/// Name of a DAG node: the input node's name for singletons, otherwise the
/// member names in brace form, e.g. "{A,B,C}".
inline std::string name_of(dagger::DaggerIndex& idx, dagger::NodeRef r) {
  auto& g = idx.graph();
  if (!r.is_scc()) return kNames.at(r.id);
  const dagger::Slot s = g.slot_of(r);
  std::set<std::string> members;
  for (dagger::NodeId u : g.input_ids()) {
    if (g.find_const(g.input_slot(u)) == s) members.insert(kNames.at(u));
  }
  std::string out = "{";
  for (const auto& m : members) out += (out.size() > 1 ? "," : "") + m;
  return out + "}";
}

/// The DAG node currently holding input node `name`.
inline dagger::NodeRef node(dagger::DaggerIndex& idx, const std::string& name) {
  return idx.component(id(name));
}

/// Dimension-0 interval of the DAG node holding `name`, as "[b,e]".
inline std::string interval(dagger::DaggerIndex& idx, const std::string& name, std::size_t dim = 0) {
  const auto l = idx.label(node(idx, name));
  return "[" + std::to_string(l.at(dim).b) + "," + std::to_string(l.at(dim).e) + "]";
}

}  // namespace example_graph
