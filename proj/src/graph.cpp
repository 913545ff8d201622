#include "cbim/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace cbim {

long long WeightedGraph::arc_count() const {
  long long total = 0;
  for (const auto& arcs : out) total += static_cast<long long>(arcs.size());
  return total;
}

WeightedGraph load_edge_list(const std::string& path, bool directed) {
  std::ifstream file(path);
  if (!file) throw DataError(path + ": cannot open edge list");

  std::unordered_map<long long, int> dense;
  std::vector<long long> original;
  std::vector<std::pair<int, int>> arcs;

  auto intern = [&](long long id) {
    auto [it, inserted] = dense.try_emplace(id, static_cast<int>(original.size()));
    if (inserted) original.push_back(id);
    return it->second;
  };

  std::string line;
  long long line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    long long u_id = 0, v_id = 0;
    std::string extra;
    if (!(fields >> u_id >> v_id) || (fields >> extra)) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected two whitespace-separated integer node ids");
    }
    if (u_id == v_id) continue;  // self-loops dropped

    const int u = intern(u_id);
    const int v = intern(v_id);
    arcs.emplace_back(u, v);
    if (!directed) arcs.emplace_back(v, u);
  }

  if (original.empty()) throw DataError(path + ": empty graph");

  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  WeightedGraph g;
  g.node_count = static_cast<int>(original.size());
  g.directed = directed;
  g.original_id = std::move(original);
  g.out.resize(g.node_count);
  g.in.resize(g.node_count);
  for (const auto& [u, v] : arcs) {
    g.out[u].push_back({v, 0.0});
    g.in[v].push_back({u, 0.0});
  }
  return g;
}

WeightedGraph assign_weights(WeightedGraph graph) {
  if (graph.arc_count() == 0) throw std::invalid_argument("assign_weights: graph has no edges");
  for (auto& arcs : graph.in) {
    if (arcs.empty()) continue;
    const Scalar w = 1.0 / static_cast<Scalar>(arcs.size());
    for (auto& arc : arcs) arc.weight = w;
  }
  for (auto& arcs : graph.out) {
    for (auto& arc : arcs) arc.weight = 1.0 / static_cast<Scalar>(graph.in[arc.to].size());
  }
  return graph;
}

ThresholdDraw sample_thresholds(const WeightedGraph& graph, const RngLabel& label) {
  Rng rng(label);
  ThresholdDraw draw;
  draw.label = label;
  draw.xi.resize(graph.node_count);
  for (int v = 0; v < graph.node_count; ++v) draw.xi[v] = rng.uniform01();
  return draw;
}

SeedSet select_seeds_by_degree(const WeightedGraph& graph, int l) {
  if (l <= 0) throw std::invalid_argument("select_seeds_by_degree: l must be positive");
  if (l > graph.node_count) {
    throw std::invalid_argument("select_seeds_by_degree: l exceeds node count");
  }
  std::vector<int> order(graph.node_count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (graph.out_degree(a) != graph.out_degree(b)) {
      return graph.out_degree(a) > graph.out_degree(b);
    }
    return graph.original_id[a] < graph.original_id[b];
  });
  SeedSet seeds;
  seeds.nodes.assign(order.begin(), order.begin() + l);
  return seeds;
}

}  // namespace cbim
