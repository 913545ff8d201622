#include "cbim/auction.hpp"

#include <cmath>
#include <stdexcept>

namespace cbim {

std::vector<int> AuctionOutcome::sold_flags() const {
  std::vector<int> flags(winner.size());
  for (std::size_t j = 0; j < winner.size(); ++j) flags[j] = winner[j] >= 0 ? 1 : 0;
  return flags;
}

Vector initial_prices(const Vector& budgets, int l) {
  if (l <= 0) throw std::invalid_argument("initial_prices: l must be positive");
  if (budgets.size() == 0) throw std::invalid_argument("initial_prices: budgets empty");
  if ((budgets.array() <= 0.0).any()) {
    throw std::invalid_argument("initial_prices: budgets must be positive");
  }
  return Vector::Constant(l, budgets.sum() / static_cast<Scalar>(l));
}

AuctionOutcome run_auction(const AuctionState& state, const BidMatrix& bids) {
  const int k = static_cast<int>(bids.rows());
  const int l = static_cast<int>(state.prices.size());
  if (bids.cols() != l || state.budgets.size() != k) {
    throw std::invalid_argument("run_auction: bid matrix shape does not match state");
  }

  AuctionOutcome outcome;
  outcome.winner.assign(l, -1);
  outcome.payment = Vector::Zero(l);
  outcome.effective_prices = Matrix::Zero(k, l);
  outcome.seed_sets.resize(k);
  outcome.costs = Vector::Zero(k);

  Vector remaining = state.budgets;
  for (int j = 0; j < l; ++j) {
    const Scalar price = state.prices[j];
    int best = -1;
    Scalar best_bid = 0.0;
    Scalar second_bid = -1.0;  // sentinel: effective bids are > price > 0
    for (int i = 0; i < k; ++i) {
      const Scalar bid = bids(i, j);
      if (!(bid > price) || bid > remaining[i]) continue;
      outcome.effective_prices(i, j) = bid;
      if (best < 0 || bid > best_bid) {
        if (best >= 0) second_bid = best_bid;
        best = i;
        best_bid = bid;
      } else if (bid > second_bid) {
        second_bid = bid;
      }
    }
    if (best < 0) continue;
    const Scalar payment = second_bid >= 0.0 ? second_bid : price;
    outcome.winner[j] = best;
    outcome.payment[j] = payment;
    outcome.seed_sets[best].push_back(j);
    outcome.costs[best] += payment;
    remaining[best] -= payment;
  }

  outcome.all_sold = true;
  for (int j = 0; j < l; ++j) {
    if (outcome.winner[j] < 0) outcome.all_sold = false;
  }
  return outcome;
}

Vector contribution_degrees(const std::vector<int>& per_seed_spread, int l) {
  if (static_cast<int>(per_seed_spread.size()) != l || l <= 0) {
    throw std::invalid_argument("contribution_degrees: need l spreads");
  }
  Scalar total = 0.0;
  for (const int s : per_seed_spread) {
    if (s < 1) throw std::invalid_argument("contribution_degrees: spreads must be >= 1");
    total += static_cast<Scalar>(s);
  }
  Vector cd(l);
  for (int j = 0; j < l; ++j) {
    cd[j] = static_cast<Scalar>(per_seed_spread[j]) * static_cast<Scalar>(l) / total;
  }
  return cd;
}

Vector adjust_prices(const Vector& prices, const std::vector<int>& sold, const Vector& cd,
                     Scalar kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw std::invalid_argument("adjust_prices: kappa must lie in (0,1)");
  }
  const int l = static_cast<int>(prices.size());
  if (static_cast<int>(sold.size()) != l || cd.size() != l) {
    throw std::invalid_argument("adjust_prices: size mismatch");
  }
  Vector next(l);
  for (int j = 0; j < l; ++j) {
    if (sold[j] == 0) {
      next[j] = prices[j] * (1.0 - kappa);
    } else if (cd[j] < 1.0) {
      next[j] = prices[j];
    } else {
      next[j] = prices[j] * std::min(1.0 + kappa, cd[j]);
    }
  }
  return next;
}

Scalar fairness_index(const Vector& rewards, const Vector& costs, Scalar omega) {
  if (omega == 0.0 || omega == 1.0) {
    throw std::invalid_argument("fairness_index: omega must not be 0 or 1");
  }
  const int k = static_cast<int>(rewards.size());
  if (k < 2 || costs.size() != k) {
    throw std::invalid_argument("fairness_index: need k >= 2 rewards and costs");
  }
  Vector unit_cost(k);
  for (int i = 0; i < k; ++i) {
    unit_cost[i] = costs[i] > 0.0 ? rewards[i] / costs[i] : 0.0;
  }
  const Scalar mean = unit_cost.mean();
  if (mean == 0.0) return 0.0;  // all-idle round, no inequality to measure

  Scalar sum = 0.0;
  for (int i = 0; i < k; ++i) sum += std::pow(unit_cost[i] / mean, omega) - 1.0;
  // the index is nonnegative for every valid omega; equal inputs can land a
  // few ulps below zero through the mean division
  return std::max(Scalar{0}, sum / (static_cast<Scalar>(k) * omega * (omega - 1.0)));
}

}  // namespace cbim
