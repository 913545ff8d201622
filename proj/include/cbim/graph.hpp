#pragma once

#include <string>
#include <vector>

#include "cbim/rng.hpp"
#include "cbim/types.hpp"

namespace cbim {

struct Arc {
  int to = 0;
  Scalar weight = 0.0;
};

// Directed influence graph over dense node ids [0, node_count). Undirected
// inputs are stored as symmetric arc pairs. Immutable after construction by
// convention; safe to share across threads.
struct WeightedGraph {
  int node_count = 0;
  bool directed = true;
  std::vector<std::vector<Arc>> out;       // u -> arcs (v, w_uv)
  std::vector<std::vector<Arc>> in;        // v -> arcs (u, w_uv)
  std::vector<long long> original_id;      // dense id -> id from the input file

  int out_degree(int v) const { return static_cast<int>(out[v].size()); }
  int in_degree(int v) const { return static_cast<int>(in[v].size()); }
  // For undirected graphs arcs are symmetric, so this is the plain degree.
  int degree(int v) const { return out_degree(v); }
  long long arc_count() const;
};

// Raised on malformed input files.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads a SNAP-style edge list: one "u v" pair per line, '#' lines ignored.
// Node ids are re-indexed densely in order of first appearance; self-loops
// are dropped and duplicate arcs collapsed. Undirected input yields both
// arcs per line.
WeightedGraph load_edge_list(const std::string& path, bool directed);

// Assigns the in-degree weight rule: every arc into v carries
// 1/in_degree(v) for directed graphs and 1/degree(v) for undirected ones
// (identical under the symmetric representation). Incoming weights of every
// node with an in-arc then sum to 1.
WeightedGraph assign_weights(WeightedGraph graph);

// Per-node activation thresholds for one bidding round.
struct ThresholdDraw {
  Vector xi;        // one value per node, in [0,1)
  RngLabel label;   // the (master, iteration, round) triple that produced it
};

ThresholdDraw sample_thresholds(const WeightedGraph& graph, const RngLabel& label);

// Ordered seed list; the order is the fixed auction order for the lifetime
// of a scenario.
struct SeedSet {
  std::vector<int> nodes;

  int size() const { return static_cast<int>(nodes.size()); }
  int operator[](int j) const { return nodes[j]; }
};

// The l nodes of highest out-degree (directed) or degree (undirected),
// ordered by descending degree with ties broken by lower original node id.
SeedSet select_seeds_by_degree(const WeightedGraph& graph, int l);

}  // namespace cbim
