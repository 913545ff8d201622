#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cbim/auction.hpp"
#include "cbim/oracle.hpp"
#include "cbim/rng.hpp"

using namespace cbim;

namespace {

Vector vec(std::initializer_list<Scalar> values) {
  Vector v(static_cast<long>(values.size()));
  long at = 0;
  for (const Scalar x : values) v[at++] = x;
  return v;
}

}  // namespace

TEST_CASE("initial prices spread the total budget over the seeds") {
  CHECK(initial_prices(vec({3, 3}), 5).isApproxToConstant(1.2, 1e-12));
  CHECK(initial_prices(vec({5, 5}), 3).isApproxToConstant(10.0 / 3.0, 1e-12));
  CHECK(initial_prices(vec({7}), 1)[0] == doctest::Approx(7.0));
  CHECK_THROWS_AS(initial_prices(vec({3, 3}), 0), std::invalid_argument);
  CHECK_THROWS_AS(initial_prices(vec({0.0, 3}), 2), std::invalid_argument);
}

TEST_CASE("two-bidder round resolves winners, losers, and an unsold seed") {
  AuctionState state{vec({1, 1, 1}), vec({3, 3}), 1};
  BidMatrix bids(2, 3);
  bids << 2.0, 0.0, 1.0,
          1.5, 0.0, 2.0;
  const AuctionOutcome outcome = run_auction(state, bids);

  CHECK(outcome.winner == std::vector<int>{0, -1, 1});
  CHECK(outcome.payment[0] == doctest::Approx(1.5));  // second price
  CHECK(outcome.payment[1] == 0.0);
  CHECK(outcome.payment[2] == doctest::Approx(1.0));  // lone effective bid pays the reserve
  CHECK(outcome.seed_sets[0] == std::vector<int>{0});
  CHECK(outcome.seed_sets[1] == std::vector<int>{2});
  CHECK_FALSE(outcome.all_sold);
  CHECK(outcome.costs[0] == doctest::Approx(1.5));
  CHECK(outcome.costs[1] == doctest::Approx(1.0));

  // the bid of 1.0 on the third seed is not strictly above the price
  CHECK_FALSE(outcome.effective(0, 2));
  CHECK(outcome.effective(1, 2));
  CHECK(outcome.effective(0, 0));
  CHECK(outcome.effective(1, 0));
}

TEST_CASE("all-zero bids sell nothing") {
  AuctionState state{vec({1, 1}), vec({2, 2}), 1};
  const AuctionOutcome outcome = run_auction(state, BidMatrix::Zero(2, 2));
  CHECK_FALSE(outcome.all_sold);
  CHECK(outcome.winner == std::vector<int>{-1, -1});
  CHECK(outcome.costs.isZero());
}

TEST_CASE("a lone bidder pays the reserve on every seed") {
  AuctionState state{vec({1, 1, 1}), vec({10, 10}), 1};
  BidMatrix bids = BidMatrix::Zero(2, 3);
  bids.row(0).setConstant(1.01);
  const AuctionOutcome outcome = run_auction(state, bids);
  CHECK(outcome.all_sold);
  for (int j = 0; j < 3; ++j) {
    CHECK(outcome.winner[j] == 0);
    CHECK(outcome.payment[j] == doctest::Approx(1.0));
  }
}

TEST_CASE("equal top bids go to the lower competitor index at the full price") {
  AuctionState state{vec({1}), vec({5, 5}), 1};
  BidMatrix bids(2, 1);
  bids << 2.0, 2.0;
  const AuctionOutcome outcome = run_auction(state, bids);
  CHECK(outcome.winner[0] == 0);
  CHECK(outcome.payment[0] == doctest::Approx(2.0));
}

TEST_CASE("budget spent earlier in the order disables later bids") {
  AuctionState state{vec({1, 1}), vec({2, 3}), 1};
  BidMatrix bids(2, 2);
  bids << 2.0, 1.8,
          1.9, 1.7;
  // bidder 0 wins seed 0 paying 1.9, leaving 0.1: its 1.8 on seed 1 is
  // now above the remaining budget and noneffective
  const AuctionOutcome outcome = run_auction(state, bids);
  CHECK(outcome.winner[0] == 0);
  CHECK(outcome.payment[0] == doctest::Approx(1.9));
  CHECK(outcome.winner[1] == 1);
  CHECK(outcome.payment[1] == doctest::Approx(1.0));
  CHECK_FALSE(outcome.effective(0, 1));
}

TEST_CASE("contribution degrees scale spreads by the round average") {
  const Vector uniform = contribution_degrees({5, 5, 5}, 3);
  CHECK(uniform.isApproxToConstant(1.0, 1e-12));

  const Vector skewed = contribution_degrees({6, 3, 3}, 3);
  CHECK(skewed[0] == doctest::Approx(1.5));
  CHECK(skewed[1] == doctest::Approx(0.75));
  CHECK(skewed[2] == doctest::Approx(0.75));
}

TEST_CASE("contribution degrees always average to one") {
  Rng rng(314);
  for (int trial = 0; trial < 100; ++trial) {
    const int l = 1 + static_cast<int>(rng.below(8));
    std::vector<int> spreads(l);
    for (int j = 0; j < l; ++j) spreads[j] = 1 + static_cast<int>(rng.below(50));
    const Vector cd = contribution_degrees(spreads, l);
    CHECK(cd.mean() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(contribution_degrees({0, 2}, 2), std::invalid_argument);
}

TEST_CASE("price adjustment follows the three branches") {
  const Vector next =
      adjust_prices(vec({1, 1, 1}), {1, 0, 1}, vec({1.5, 1.0, 1.2}), 0.1);
  CHECK(next[0] == doctest::Approx(1.1));
  CHECK(next[1] == doctest::Approx(0.9));
  CHECK(next[2] == doctest::Approx(1.1));

  // sold but below-average contribution: unchanged
  const Vector flat = adjust_prices(vec({2}), {1}, vec({0.5}), 0.1);
  CHECK(flat[0] == doctest::Approx(2.0));

  // unsold with the reference kappa
  const Vector depressed = adjust_prices(vec({2}), {0}, vec({1.0}), 0.3);
  CHECK(depressed[0] == doctest::Approx(1.4));

  CHECK_THROWS_AS(adjust_prices(vec({1}), {1}, vec({1.0}), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(adjust_prices(vec({1}), {1}, vec({1.0}), 1.0), std::invalid_argument);
}

TEST_CASE("price adjustment stays within the kappa band and positive") {
  Rng rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const int l = 1 + static_cast<int>(rng.below(6));
    Vector prices(l);
    Vector cd(l);
    std::vector<int> sold(l);
    for (int j = 0; j < l; ++j) {
      prices[j] = rng.uniform(0.01, 5.0);
      cd[j] = rng.uniform(0.0, 3.0);
      sold[j] = rng.below(2) == 0 ? 0 : 1;
    }
    const Scalar kappa = rng.uniform(0.01, 0.99);
    const Vector next = adjust_prices(prices, sold, cd, kappa);
    for (int j = 0; j < l; ++j) {
      CHECK(next[j] >= prices[j] * (1.0 - kappa) - 1e-12);
      CHECK(next[j] <= prices[j] * (1.0 + kappa) + 1e-12);
      CHECK(next[j] > 0.0);
    }
  }
}

TEST_CASE("fairness index is zero for equal unit costs") {
  CHECK(fairness_index(vec({4, 4}), vec({2, 2}), 2.0) == doctest::Approx(0.0));
  CHECK(fairness_index(vec({6, 3}), vec({4, 2}), 2.0) == doctest::Approx(0.0));
}

TEST_CASE("fairness index matches the hand-evaluated reference case") {
  // R = [2, 4], mean 3: GE = (1/(2*2*1)) * ((2/3)^2 - 1 + (4/3)^2 - 1) = 1/18
  CHECK(fairness_index(vec({4, 4}), vec({2, 1}), 2.0) == doctest::Approx(1.0 / 18.0).epsilon(1e-12));
}

TEST_CASE("fairness index edge rules") {
  // zero cost forces a zero unit cost
  CHECK(fairness_index(vec({5, 0}), vec({2, 0}), 2.0) ==
        doctest::Approx(fairness_index(vec({5, 0}), vec({2, 5}), 2.0)));
  // all idle: no inequality to measure
  CHECK(fairness_index(vec({0, 0}), vec({0, 0}), 2.0) == 0.0);
  CHECK_THROWS_AS(fairness_index(vec({1, 1}), vec({1, 1}), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fairness_index(vec({1, 1}), vec({1, 1}), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(fairness_index(vec({1}), vec({1}), 2.0), std::invalid_argument);
}

TEST_CASE("fairness index is nonnegative for omega 2") {
  Rng rng(555);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(5));
    Vector rewards(k), costs(k);
    for (int i = 0; i < k; ++i) {
      rewards[i] = rng.uniform(0.0, 50.0);
      costs[i] = rng.below(5) == 0 ? 0.0 : rng.uniform(0.1, 10.0);
    }
    CHECK(fairness_index(rewards, costs, 2.0) >= 0.0);
  }
}

TEST_CASE("raising a noneffective bid that stays noneffective changes nothing") {
  AuctionState state{vec({1, 1}), vec({3, 3}), 1};
  BidMatrix bids(2, 2);
  bids << 2.0, 0.4,
          1.5, 0.9;
  const AuctionOutcome base = run_auction(state, bids);
  REQUIRE_FALSE(base.effective(0, 1));
  BidMatrix raised = bids;
  raised(0, 1) = 0.99;  // still not above the price
  const AuctionOutcome same = run_auction(state, raised);
  CHECK(same.winner == base.winner);
  CHECK((same.payment.array() == base.payment.array()).all());
}

TEST_CASE("exhaustive grid enumeration finds no property violations") {
  const auto report = oracle::enumerate_auction(vec({1, 1}), vec({3, 3}), {0.0, 0.5, 1.1, 2.0});
  CHECK(report.trials == 256);
  if (!report.pass()) FAIL(report.mismatches.front().detail);

  const auto zero_grid = oracle::enumerate_auction(vec({1, 1}), vec({3, 3}), {0.0});
  CHECK(zero_grid.pass());

  CHECK_THROWS_AS(
      oracle::enumerate_auction(vec({1, 1, 1, 1, 1, 1, 1}), vec({3, 3, 3}),
                                {0.0, 0.5, 1.1, 2.0, 2.5, 3.0}),
      std::invalid_argument);
}
