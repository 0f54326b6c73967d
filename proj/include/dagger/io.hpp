#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "dagger/error.hpp"
#include "dagger/update_op.hpp"
#include "dagger/workload.hpp"

namespace dagger {

/// Malformed graph or workload text; carries the 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

inline NodeId parse_id(std::string_view tok, std::size_t line) {
  std::uint64_t value = 0;
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(line, "expected a non-negative integer node id, got '" + std::string(tok) + "'");
  }
  if (value >= kNoSlot) throw ParseError(line, "node id " + std::string(tok) + " is too large");
  return static_cast<NodeId>(value);
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

/// Reads "SRC DST" lines. Lines starting with '#' are comments, except a
/// "#nodes N" header that widens the node universe to [0, N).
inline GraphData read_graph(std::istream& in) {
  GraphData g;
  std::size_t declared = 0;
  std::size_t bound = 0;
  std::string text;
  for (std::size_t line = 1; std::getline(in, text); ++line) {
    const auto toks = detail::split_ws(text);
    if (toks.empty()) continue;
    if (toks[0].front() == '#') {
      if (toks[0] == "#nodes") {
        if (toks.size() != 2) throw ParseError(line, "expected '#nodes N'");
        declared = detail::parse_id(toks[1], line);
      }
      continue;
    }
    if (toks.size() != 2) throw ParseError(line, "expected 'SRC DST'");
    const NodeId u = detail::parse_id(toks[0], line);
    const NodeId v = detail::parse_id(toks[1], line);
    g.edges.push_back({u, v});
    bound = std::max<std::size_t>(bound, std::max(u, v) + std::size_t{1});
  }
  g.node_count = std::max(declared, bound);
  return g;
}

inline GraphData read_graph_file(const std::string& path) {
  auto in = detail::open_input(path);
  return read_graph(in);
}

/// Canonical form: a "#nodes N" header followed by one edge per line.
inline void write_graph(std::ostream& out, const GraphData& g) {
  out << "#nodes " << g.node_count << '\n';
  for (const InputEdge& e : g.edges) out << e.source << ' ' << e.target << '\n';
}

/// Reads workload lines: "IE u v", "DE u v", "DN u", "Q u v" or
/// "IN u O v1 ... I w1 ...". Blank lines and '#' comments are skipped.
inline std::vector<UpdateOp> read_workload(std::istream& in) {
  std::vector<UpdateOp> ops;
  std::string text;
  for (std::size_t line = 1; std::getline(in, text); ++line) {
    const auto toks = detail::split_ws(text);
    if (toks.empty() || toks[0].front() == '#') continue;
    const std::string_view tag = toks[0];
    auto arity = [&](std::size_t n) {
      if (toks.size() != n + 1) {
        throw ParseError(line, "'" + std::string(tag) + "' takes " + std::to_string(n) + " node id(s)");
      }
    };
    auto id = [&](std::size_t i) { return detail::parse_id(toks[i], line); };
    if (tag == "IE") {
      arity(2);
      ops.emplace_back(op::InsertEdge{id(1), id(2)});
    } else if (tag == "DE") {
      arity(2);
      ops.emplace_back(op::DeleteEdge{id(1), id(2)});
    } else if (tag == "Q") {
      arity(2);
      ops.emplace_back(op::Query{id(1), id(2)});
    } else if (tag == "DN") {
      arity(1);
      ops.emplace_back(op::DeleteNode{id(1)});
    } else if (tag == "IN") {
      if (toks.size() < 4 || toks[2] != "O") throw ParseError(line, "expected 'IN u O v1 ... I w1 ...'");
      op::InsertNode ins{id(1), {}, {}};
      std::size_t i = 3;
      for (; i < toks.size() && toks[i] != "I"; ++i) ins.out.push_back(id(i));
      if (i == toks.size()) throw ParseError(line, "missing 'I' list in 'IN'");
      for (++i; i < toks.size(); ++i) ins.in.push_back(id(i));
      ops.emplace_back(std::move(ins));
    } else {
      throw ParseError(line, "unknown operation '" + std::string(tag) + "'");
    }
  }
  return ops;
}

inline std::vector<UpdateOp> read_workload_file(const std::string& path) {
  auto in = detail::open_input(path);
  return read_workload(in);
}

inline void write_op(std::ostream& out, const UpdateOp& op) {
  std::visit(
      [&out](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, op::InsertEdge>) {
          out << "IE " << o.u << ' ' << o.v;
        } else if constexpr (std::is_same_v<T, op::DeleteEdge>) {
          out << "DE " << o.u << ' ' << o.v;
        } else if constexpr (std::is_same_v<T, op::DeleteNode>) {
          out << "DN " << o.u;
        } else if constexpr (std::is_same_v<T, op::Query>) {
          out << "Q " << o.u << ' ' << o.v;
        } else {
          out << "IN " << o.u << " O";
          for (NodeId w : o.out) out << ' ' << w;
          out << " I";
          for (NodeId w : o.in) out << ' ' << w;
        }
      },
      op);
  out << '\n';
}

inline void write_workload(std::ostream& out, const std::vector<UpdateOp>& ops) {
  for (const UpdateOp& op : ops) write_op(out, op);
}

}  // namespace dagger
