#pragma once

#include <vector>

#include "cbim/auction.hpp"
#include "cbim/config.hpp"
#include "cbim/diffusion.hpp"
#include "cbim/graph.hpp"

namespace cbim {

// The multi-agent bidding environment: one auction over the fixed seed
// order per round, competitive diffusion for rewards, standalone per-seed
// spreads for contribution degrees, and the starting-price lifecycle.
// Budgets replenish every round; the previous round's leftover budget is
// carried only as an observation feature.
class BiddingEnvironment {
 public:
  BiddingEnvironment(const WeightedGraph* graph, SeedSet seeds, Vector budgets, Scalar kappa,
                     Scalar omega, int t_up, RewardMode reward_mode);

  // Starts an iteration: prices back to the uniform initial rule,
  // observations to [zeros, budget].
  void reset();

  struct RoundResult {
    AuctionOutcome auction;
    Vector rewards;            // raw spread per competitor
    std::vector<int> per_seed_spread;
    Vector contribution;       // CD per seed
    Scalar ge = 0.0;
    int diffusion_steps = 0;
  };

  // Runs one bidding round under the given threshold draw and advances the
  // environment (price adjustment, observation update, round counter).
  RoundResult step(const BidMatrix& bids, const ThresholdDraw& thresholds);

  Vector observation(int agent) const;  // [g_prev_i, rb_prev_i], length l+1
  Vector joint_observation() const;

  const Vector& prices() const { return prices_; }
  const Vector& budgets() const { return budgets_; }
  const SeedSet& seeds() const { return seeds_; }
  const WeightedGraph& graph() const { return *graph_; }
  int round_index() const { return round_index_; }
  int competitor_count() const { return static_cast<int>(budgets_.size()); }
  int seed_count() const { return seeds_.size(); }

 private:
  const WeightedGraph* graph_;
  SeedSet seeds_;
  Vector budgets_;
  Scalar kappa_;
  Scalar omega_;
  int t_up_;
  RewardMode reward_mode_;

  Vector prices_;
  int round_index_ = 1;
  Matrix prev_effective_;  // k x l, previous round's effective prices
  Vector prev_remaining_;  // per agent
};

}  // namespace cbim
