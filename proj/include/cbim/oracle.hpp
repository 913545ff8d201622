#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cbim/auction.hpp"
#include "cbim/diffusion.hpp"
#include "cbim/graph.hpp"
#include "cbim/types.hpp"

namespace cbim::oracle {

struct Mismatch {
  long long trial = 0;
  std::string detail;  // carries the inputs needed to replay the instance
};

struct OracleReport {
  std::string name;
  long long trials = 0;
  std::vector<Mismatch> mismatches;
  Scalar max_error = 0.0;

  bool pass() const { return mismatches.empty(); }
};

// Brute-force competitive linear-threshold fixed point for graphs of at
// most 64 nodes: every sweep recomputes every node's qualification from
// scratch over its full in-list, then commits synchronously. Shares no
// traversal code with diffuse_clt.
DiffusionResult fixpoint_diffusion(const WeightedGraph& graph, const ThresholdDraw& thresholds,
                                   const SeedSet& seeds, const Allocation& alloc, int t_up);

// Exhausts every bid matrix over the grid (grid^(k*l) must not exceed 1e6),
// resolves each auction independently, and checks run_auction against it
// along with the payment-sandwich, budget-feasibility, disjointness, and
// noneffective-bid-invariance properties.
OracleReport enumerate_auction(const Vector& prices, const Vector& budgets,
                               const std::vector<Scalar>& bid_grid);

// Central-difference check of an analytic gradient, coordinate by
// coordinate. The error of coordinate c is |fd - analytic| divided by
// max(|fd|, |analytic|, 1e-4), so near-zero coordinates are judged on
// absolute error.
OracleReport grad_check(const std::function<Scalar(const Vector&)>& value,
                        const std::function<Vector(const Vector&)>& analytic_gradient,
                        const Vector& params, Scalar h, Scalar tol);

// Randomized suites used by tests, the acceptance gate, and `oracle-check`.
OracleReport diffusion_equivalence_suite(int trials, std::uint64_t seed);
OracleReport auction_property_suite();
OracleReport gradient_check_suite(int networks, std::uint64_t seed);
OracleReport monotonicity_suite(int trials, std::uint64_t seed);

// Random small weighted graph for oracle trials; weights are dyadic
// (multiples of 1/16) on half the instances so competitor weight sums can
// collide exactly and exercise the tie rule.
WeightedGraph random_small_graph(int max_nodes, Rng& rng);

}  // namespace cbim::oracle
