#pragma once

#include <vector>

#include "cbim/types.hpp"

namespace cbim {

// Per-round auction inputs. Seed positions are processed in index order,
// which is the fixed auction order of the scenario's seed set.
struct AuctionState {
  Vector prices;   // starting price per seed, all > 0
  Vector budgets;  // per competitor, all > 0
  int round_index = 1;
};

// bids(i, j) = competitor i's sealed bid for seed j.
using BidMatrix = Matrix;

struct AuctionOutcome {
  std::vector<int> winner;                  // per seed, -1 = unsold
  Vector payment;                           // per seed, 0 when unsold
  Matrix effective_prices;                  // k x l, bid value where effective else 0
  std::vector<std::vector<int>> seed_sets;  // per competitor, won seed positions
  Vector costs;                             // per competitor, sum of its payments
  bool all_sold = false;

  bool sold(int j) const { return winner[j] >= 0; }
  bool effective(int i, int j) const { return effective_prices(i, j) > 0.0; }
  std::vector<int> sold_flags() const;
};

// Uniform initial starting prices: total budget spread over the seeds.
Vector initial_prices(const Vector& budgets, int l);

// Sealed-bid second-price auction per seed, in order. A bid is effective iff
// it is strictly above the seed's starting price and does not exceed the
// bidder's remaining budget at that point in the order. The highest
// effective bid wins (ties to the lowest competitor index) and pays the
// second-highest effective bid, or the starting price when it stood alone.
AuctionOutcome run_auction(const AuctionState& state, const BidMatrix& bids);

// Contribution degree of each seed: its standalone spread relative to the
// round's average per-seed spread. The mean over seeds is exactly 1.
Vector contribution_degrees(const std::vector<int>& per_seed_spread, int l);

// Starting-price adjustment for the next round: unsold seeds are depressed
// by (1-kappa); sold seeds keep their price when below-average contributors
// and rise by min(1+kappa, CD) otherwise.
Vector adjust_prices(const Vector& prices, const std::vector<int>& sold, const Vector& cd,
                     Scalar kappa);

// Generalized-entropy fairness index over the competitors' unit costs
// R_i = reward_i / cost_i (R_i = 0 when cost_i = 0). Returns 0 when every
// R_i is zero. 0 means perfectly fair.
Scalar fairness_index(const Vector& rewards, const Vector& costs, Scalar omega);

}  // namespace cbim
