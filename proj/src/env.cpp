#include "cbim/env.hpp"

#include <stdexcept>

namespace cbim {

BiddingEnvironment::BiddingEnvironment(const WeightedGraph* graph, SeedSet seeds, Vector budgets,
                                       Scalar kappa, Scalar omega, int t_up,
                                       RewardMode reward_mode)
    : graph_(graph),
      seeds_(std::move(seeds)),
      budgets_(std::move(budgets)),
      kappa_(kappa),
      omega_(omega),
      t_up_(t_up > 0 ? t_up : graph->node_count),
      reward_mode_(reward_mode) {
  if (budgets_.size() < 2) throw std::invalid_argument("environment: need k >= 2 competitors");
  reset();
}

void BiddingEnvironment::reset() {
  prices_ = initial_prices(budgets_, seeds_.size());
  round_index_ = 1;
  prev_effective_ = Matrix::Zero(budgets_.size(), seeds_.size());
  prev_remaining_ = budgets_;
}

Vector BiddingEnvironment::observation(int agent) const {
  Vector obs(seeds_.size() + 1);
  obs << prev_effective_.row(agent).transpose(), prev_remaining_[agent];
  return obs;
}

Vector BiddingEnvironment::joint_observation() const {
  const int k = competitor_count();
  Vector joint(static_cast<long>(k) * (seeds_.size() + 1));
  for (int i = 0; i < k; ++i) {
    joint.segment(static_cast<long>(i) * (seeds_.size() + 1), seeds_.size() + 1) = observation(i);
  }
  return joint;
}

BiddingEnvironment::RoundResult BiddingEnvironment::step(const BidMatrix& bids,
                                                         const ThresholdDraw& thresholds) {
  const int k = competitor_count();
  const int l = seed_count();

  RoundResult result;
  AuctionState state{prices_, budgets_, round_index_};
  result.auction = run_auction(state, bids);

  if (reward_mode_ == RewardMode::kExactClt) {
    Allocation alloc;
    alloc.owner_of_seed = result.auction.winner;
    alloc.competitor_count = k;
    const DiffusionResult diffusion = diffuse_clt(*graph_, thresholds, seeds_, alloc, t_up_);
    result.diffusion_steps = diffusion.steps_used;
    result.rewards = Vector::Zero(k);
    for (int i = 0; i < k; ++i) result.rewards[i] = static_cast<Scalar>(spread(diffusion, i));
    result.per_seed_spread = single_seed_spreads(*graph_, thresholds, seeds_, t_up_);
  } else {
    // degree proxy: skip simulation, score a seed by its one-step frontier
    // (itself plus its out-neighbors)
    result.rewards = Vector::Zero(k);
    result.per_seed_spread.assign(l, 0);
    for (int j = 0; j < l; ++j) {
      result.per_seed_spread[j] = 1 + graph_->out_degree(seeds_[j]);
      const int owner = result.auction.winner[j];
      if (owner >= 0) result.rewards[owner] += static_cast<Scalar>(result.per_seed_spread[j]);
    }
  }

  result.contribution = contribution_degrees(result.per_seed_spread, l);
  result.ge = fairness_index(result.rewards, result.auction.costs, omega_);

  prices_ = adjust_prices(prices_, result.auction.sold_flags(), result.contribution, kappa_);
  prev_effective_ = result.auction.effective_prices;
  prev_remaining_ = budgets_ - result.auction.costs;
  ++round_index_;
  return result;
}

}  // namespace cbim
