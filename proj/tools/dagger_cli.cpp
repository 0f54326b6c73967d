// Command-line front end: graph and workload generation, index builds,
// single queries and timed workload replays.

#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dagger/bench.hpp"
#include "dagger/error.hpp"
#include "dagger/index.hpp"
#include "dagger/io.hpp"
#include "dagger/workload.hpp"

namespace {

constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

// Writes through a file when a path is given, stdout otherwise.
template <class Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw dagger::InputError("cannot write '" + path + "'");
  write(out);
  if (!out) throw dagger::InputError("write to '" + path + "' failed");
}

dagger::OpRatios parse_ratios(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw dagger::InputError("--ratios: '" + item + "' is not a number");
    }
  }
  if (parts.size() != 4) throw dagger::InputError("--ratios expects four comma-separated weights");
  return {parts[0], parts[1], parts[2], parts[3]};
}

struct Options {
  std::string model = "er";
  std::size_t n = 1000;
  std::size_t m = 1500;
  std::size_t d = 2;
  double reverse_prob = 0.5;
  std::uint64_t seed = 1;
  std::size_t k = 1;
  std::string variant = "dg1";
  std::size_t qpu = 0;
  std::string ratios = "60,15,20,5";
  std::size_t count = 1000;
  std::size_t warmup = 0;
  std::string out;
  std::string report = "json";
  std::string graph;
  std::string workload;
  std::string dataset;
  std::vector<std::uint32_t> pair;
};

void cmd_gen_graph(const Options& o) {
  dagger::GraphData g;
  if (o.model == "er") {
    g = dagger::gen_er(o.n, o.m, o.seed);
  } else if (o.model == "ba") {
    g = dagger::gen_ba_directed(o.n, o.d, o.reverse_prob, o.seed);
  } else {
    throw dagger::InputError("--model must be 'er' or 'ba'");
  }
  emit(o.out, [&](std::ostream& out) { dagger::write_graph(out, g); });
}

void cmd_gen_updates(const Options& o) {
  const dagger::GraphData g = dagger::read_graph_file(o.graph);
  dagger::UpdateGenConfig cfg;
  cfg.count = o.count;
  cfg.ratios = parse_ratios(o.ratios);
  cfg.d = o.d;
  cfg.seed = o.seed;
  const auto ops = dagger::gen_updates(g, cfg);
  emit(o.out, [&](std::ostream& out) { dagger::write_workload(out, ops); });
}

void cmd_build(const Options& o) {
  const dagger::GraphData g = dagger::read_graph_file(o.graph);
  const auto start = std::chrono::steady_clock::now();
  auto index = dagger::DaggerIndex::build(g.node_count, g.edges, {o.k, o.seed});
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  const auto& dg = index.graph();
  std::size_t largest = 1;
  for (dagger::Slot s : dg.dag_nodes()) largest = std::max<std::size_t>(largest, dg.size(s));
  nlohmann::ordered_json j;
  j["nodes"] = dg.input_node_count();
  j["edges"] = dg.input_edge_count();
  j["dag_nodes"] = dg.dag_node_count();
  j["multi_node_sccs"] = dg.scc_count();
  j["largest_scc"] = largest;
  j["k"] = o.k;
  j["seed"] = o.seed;
  j["build_ms"] = ms;
  emit(o.out, [&](std::ostream& out) { out << j.dump() << '\n'; });
}

void cmd_query(const Options& o) {
  const dagger::GraphData g = dagger::read_graph_file(o.graph);
  auto index = dagger::DaggerIndex::build(g.node_count, g.edges, {o.k, o.seed});
  const bool yes = index.reachable(o.pair.at(0), o.pair.at(1));
  emit(o.out, [&](std::ostream& out) { out << (yes ? "true" : "false") << '\n'; });
}

void cmd_bench(const Options& o) {
  const dagger::GraphData g = dagger::read_graph_file(o.graph);
  const auto ops = dagger::read_workload_file(o.workload);
  dagger::BenchConfig cfg;
  cfg.variant = dagger::Variant::parse(o.variant);
  cfg.qpu = o.qpu;
  cfg.seed = o.seed;
  cfg.warmup = o.warmup;
  cfg.dataset = o.dataset.empty() ? std::filesystem::path(o.graph).filename().string() : o.dataset;
  const dagger::BenchReport rep = dagger::run_bench(g, ops, cfg);
  emit(o.out, [&](std::ostream& out) {
    if (o.report == "csv") {
      dagger::write_csv_header(out);
      dagger::write_csv_row(out, rep);
    } else {
      out << dagger::to_json(rep).dump() << '\n';
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic reachability index: generators, builds, queries and benchmarks"};
  app.require_subcommand(1);
  Options o;

  auto* gen_graph = app.add_subcommand("gen-graph", "Generate a synthetic graph");
  gen_graph->add_option("--model", o.model, "er or ba")->check(CLI::IsMember({"er", "ba"}));
  gen_graph->add_option("--n", o.n, "Node count");
  gen_graph->add_option("--m", o.m, "Edge count (er)");
  gen_graph->add_option("--d", o.d, "Half the maximum out-degree of a new node (ba)");
  gen_graph->add_option("--reverse-prob", o.reverse_prob, "Probability of reversing each edge (ba)");
  gen_graph->add_option("--seed", o.seed, "Random seed");
  gen_graph->add_option("--out", o.out, "Output file (default: stdout)");

  auto* gen_updates = app.add_subcommand("gen-updates", "Generate an update workload for a graph");
  gen_updates->add_option("--graph", o.graph, "Graph file")->required();
  gen_updates->add_option("--count", o.count, "Number of updates");
  gen_updates->add_option("--ratios", o.ratios, "insert-edge,delete-edge,insert-node,delete-node weights");
  gen_updates->add_option("--d", o.d, "New nodes draw in/out degree from [0, 2d]");
  gen_updates->add_option("--seed", o.seed, "Random seed");
  gen_updates->add_option("--out", o.out, "Output file (default: stdout)");

  auto* build = app.add_subcommand("build", "Build the index and print a summary");
  build->add_option("--graph", o.graph, "Graph file")->required();
  build->add_option("--k", o.k, "Label dimensions");
  build->add_option("--seed", o.seed, "Random seed");
  build->add_option("--out", o.out, "Output file (default: stdout)");

  auto* query = app.add_subcommand("query", "Answer one reachability query");
  query->add_option("--graph", o.graph, "Graph file")->required();
  query->add_option("--k", o.k, "Label dimensions");
  query->add_option("--seed", o.seed, "Random seed");
  query->add_option("--pair", o.pair, "Source and target node ids")->required()->expected(2);
  query->add_option("--out", o.out, "Output file (default: stdout)");

  auto* bench = app.add_subcommand("bench", "Replay a workload and report timings");
  bench->add_option("--graph", o.graph, "Graph file")->required();
  bench->add_option("--workload", o.workload, "Workload file")->required();
  bench->add_option("--variant", o.variant, "dfs, dg0, dg1, dg2, ...");
  bench->add_option("--qpu", o.qpu, "Random queries after every update");
  bench->add_option("--seed", o.seed, "Random seed");
  bench->add_option("--warmup", o.warmup, "Leading operations excluded from statistics");
  bench->add_option("--dataset", o.dataset, "Dataset name in the report (default: graph file name)");
  bench->add_option("--report", o.report, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  bench->add_option("--out", o.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*gen_graph) cmd_gen_graph(o);
    if (*gen_updates) cmd_gen_updates(o);
    if (*build) cmd_build(o);
    if (*query) cmd_query(o);
    if (*bench) cmd_bench(o);
  } catch (const dagger::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
