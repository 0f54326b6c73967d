#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "dagger/dagger_graph.hpp"

namespace dagger {

namespace op {

struct InsertEdge {
  NodeId u;
  NodeId v;
  friend bool operator==(const InsertEdge&, const InsertEdge&) = default;
};

struct DeleteEdge {
  NodeId u;
  NodeId v;
  friend bool operator==(const DeleteEdge&, const DeleteEdge&) = default;
};

struct InsertNode {
  NodeId u;
  std::vector<NodeId> out;
  std::vector<NodeId> in;
  friend bool operator==(const InsertNode&, const InsertNode&) = default;
};

struct DeleteNode {
  NodeId u;
  friend bool operator==(const DeleteNode&, const DeleteNode&) = default;
};

struct Query {
  NodeId u;
  NodeId v;
  friend bool operator==(const Query&, const Query&) = default;
};

}  // namespace op

/// One line of a workload: an update, or a reachability query to replay.
using UpdateOp = std::variant<op::InsertEdge, op::DeleteEdge, op::InsertNode, op::DeleteNode, op::Query>;

/// Operation kinds in report order.
enum class OpKind : std::uint8_t { kQuery, kInsertEdge, kDeleteEdge, kInsertNode, kDeleteNode };
inline constexpr std::size_t kOpKindCount = 5;

inline OpKind kind_of(const UpdateOp& op) {
  switch (op.index()) {
    case 0:
      return OpKind::kInsertEdge;
    case 1:
      return OpKind::kDeleteEdge;
    case 2:
      return OpKind::kInsertNode;
    case 3:
      return OpKind::kDeleteNode;
    default:
      return OpKind::kQuery;
  }
}

/// Short tag used in reports and workload files.
constexpr std::string_view tag(OpKind k) {
  switch (k) {
    case OpKind::kQuery:
      return "Q";
    case OpKind::kInsertEdge:
      return "EI";
    case OpKind::kDeleteEdge:
      return "ED";
    case OpKind::kInsertNode:
      return "NI";
    case OpKind::kDeleteNode:
      return "ND";
  }
  return "?";
}

}  // namespace dagger
