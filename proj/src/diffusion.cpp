#include "cbim/diffusion.hpp"

#include <algorithm>
#include <stdexcept>

namespace cbim {

namespace {

void check_inputs(const WeightedGraph& graph, const ThresholdDraw& thresholds,
                  const SeedSet& seeds, const Allocation& alloc, int t_up) {
  if (t_up < 1) throw std::invalid_argument("diffuse_clt: t_up must be >= 1");
  if (alloc.competitor_count < 1) throw std::invalid_argument("diffuse_clt: need a competitor");
  if (static_cast<int>(alloc.owner_of_seed.size()) != seeds.size()) {
    throw std::invalid_argument("diffuse_clt: allocation does not match seed set");
  }
  if (thresholds.xi.size() != graph.node_count) {
    throw std::invalid_argument("diffuse_clt: threshold draw does not match graph");
  }
  for (int j = 0; j < seeds.size(); ++j) {
    if (seeds[j] < 0 || seeds[j] >= graph.node_count) {
      throw std::invalid_argument("diffuse_clt: seed id out of range");
    }
    if (alloc.owner(j) >= alloc.competitor_count) {
      throw std::invalid_argument("diffuse_clt: owner index out of range");
    }
  }
}

}  // namespace

DiffusionResult diffuse_clt(const WeightedGraph& graph, const ThresholdDraw& thresholds,
                            const SeedSet& seeds, const Allocation& alloc, int t_up) {
  check_inputs(graph, thresholds, seeds, alloc, t_up);
  const int n = graph.node_count;
  const int k = alloc.competitor_count;

  std::vector<int> owner(n, -1);
  std::vector<char> blocked(n, 0);
  std::vector<int> frontier;
  for (int j = 0; j < seeds.size(); ++j) {
    const int node = seeds[j];
    if (alloc.owner(j) >= 0) {
      owner[node] = alloc.owner(j);
      frontier.push_back(node);
    } else {
      blocked[node] = 1;
    }
  }
  std::sort(frontier.begin(), frontier.end());
  frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());

  // Accumulated in-neighbor weight per (competitor, node); grows as owners'
  // cascades reach v and persists across steps.
  Matrix wsum = Matrix::Zero(k, n);
  std::vector<char> touched_flag(n, 0);
  std::vector<int> touched;

  DiffusionResult result;
  result.activated_by.resize(k);

  while (!frontier.empty() && result.steps_used < t_up) {
    touched.clear();
    for (const int u : frontier) {
      const int owner_u = owner[u];
      for (const Arc& arc : graph.out[u]) {
        const int v = arc.to;
        if (owner[v] >= 0 || blocked[v]) continue;
        wsum(owner_u, v) += arc.weight;
        if (!touched_flag[v]) {
          touched_flag[v] = 1;
          touched.push_back(v);
        }
      }
    }

    std::vector<std::pair<int, int>> pending;  // (node, competitor)
    for (const int v : touched) {
      touched_flag[v] = 0;
      int best = -1;
      Scalar best_w = 0.0;
      for (int i = 0; i < k; ++i) {
        const Scalar w = wsum(i, v);
        if (w > thresholds.xi[v] && (best < 0 || w > best_w)) {
          best = i;
          best_w = w;
        }
      }
      if (best >= 0) pending.emplace_back(v, best);
    }

    if (pending.empty()) break;
    std::sort(pending.begin(), pending.end());
    frontier.clear();
    for (const auto& [v, i] : pending) {
      owner[v] = i;
      frontier.push_back(v);
    }
    ++result.steps_used;
  }

  for (int v = 0; v < n; ++v) {
    if (owner[v] >= 0) result.activated_by[owner[v]].push_back(v);
  }
  return result;
}

std::vector<int> single_seed_spreads(const WeightedGraph& graph, const ThresholdDraw& thresholds,
                                     const SeedSet& seeds, int t_up) {
  std::vector<int> spreads(seeds.size(), 0);
  for (int j = 0; j < seeds.size(); ++j) {
    SeedSet singleton;
    singleton.nodes = {seeds[j]};
    const auto result = diffuse_clt(graph, thresholds, singleton, Allocation::single(1, 0), t_up);
    spreads[j] = spread(result, 0);
  }
  return spreads;
}

}  // namespace cbim
