#pragma once

#include <vector>

#include "cbim/graph.hpp"
#include "cbim/types.hpp"

namespace cbim {

// Which competitor owns each seed after an auction round. Seeds without an
// owner failed their bid and are blocked: they neither activate others nor
// get activated.
struct Allocation {
  std::vector<int> owner_of_seed;  // per seed position, -1 = failed bid
  int competitor_count = 0;

  int owner(int j) const { return owner_of_seed[j]; }

  static Allocation single(int seed_count, int seed_index, int competitor = 0) {
    Allocation a;
    a.owner_of_seed.assign(seed_count, -1);
    a.owner_of_seed[seed_index] = competitor;
    a.competitor_count = competitor + 1;
    return a;
  }

  static Allocation all_owned_by(int competitor, int seed_count, int competitor_count) {
    Allocation a;
    a.owner_of_seed.assign(seed_count, competitor);
    a.competitor_count = competitor_count;
    return a;
  }
};

struct DiffusionResult {
  std::vector<std::vector<int>> activated_by;  // per competitor, sorted node ids (seeds included)
  int steps_used = 0;                          // committed synchronous steps, <= t_up
};

inline int spread(const DiffusionResult& result, int competitor) {
  return static_cast<int>(result.activated_by[competitor].size());
}

// Competitive linear-threshold propagation to a synchronous fixed point.
// An inactive, non-blocked node v activates for competitor i once the
// weights of i's active in-neighbors sum strictly above v's threshold;
// when several competitors qualify in the same step the one with the
// highest accumulated weight wins, ties going to the lowest index.
// Stops when a step commits nothing or after t_up steps.
DiffusionResult diffuse_clt(const WeightedGraph& graph, const ThresholdDraw& thresholds,
                            const SeedSet& seeds, const Allocation& alloc, int t_up);

// Standalone spread of each seed: a non-competitive singleton run under the
// same threshold draw, with the other seeds treated as ordinary nodes.
std::vector<int> single_seed_spreads(const WeightedGraph& graph, const ThresholdDraw& thresholds,
                                     const SeedSet& seeds, int t_up);

}  // namespace cbim
