#include "cbim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cbim/marl.hpp"
#include "cbim/net.hpp"

namespace cbim::oracle {

namespace {

std::string describe_graph(const WeightedGraph& g, const ThresholdDraw& draw,
                           const SeedSet& seeds, const Allocation& alloc, int t_up) {
  std::ostringstream os;
  os << "n=" << g.node_count << " arcs=[";
  for (int u = 0; u < g.node_count; ++u) {
    for (const Arc& a : g.out[u]) os << u << "->" << a.to << ":" << a.weight << ",";
  }
  os << "] xi=[";
  for (int v = 0; v < g.node_count; ++v) os << draw.xi[v] << ",";
  os << "] seeds=[";
  for (int j = 0; j < seeds.size(); ++j) os << seeds[j] << ":" << alloc.owner(j) << ",";
  os << "] k=" << alloc.competitor_count << " t_up=" << t_up;
  return os.str();
}

}  // namespace

DiffusionResult fixpoint_diffusion(const WeightedGraph& graph, const ThresholdDraw& thresholds,
                                   const SeedSet& seeds, const Allocation& alloc, int t_up) {
  if (graph.node_count > 64) {
    throw std::invalid_argument("fixpoint_diffusion: test oracle capped at 64 nodes");
  }
  if (t_up < 1) throw std::invalid_argument("fixpoint_diffusion: t_up must be >= 1");
  const int n = graph.node_count;
  const int k = alloc.competitor_count;

  std::vector<int> owner(n, -1);
  std::vector<char> blocked(n, 0);
  for (int j = 0; j < seeds.size(); ++j) {
    if (alloc.owner(j) >= 0) {
      owner[seeds[j]] = alloc.owner(j);
    } else {
      blocked[seeds[j]] = 1;
    }
  }

  DiffusionResult result;
  result.activated_by.resize(k);

  while (result.steps_used < t_up) {
    std::vector<std::pair<int, int>> pending;
    for (int v = 0; v < n; ++v) {
      if (owner[v] >= 0 || blocked[v]) continue;
      // full recomputation of every competitor's accumulated weight on v
      std::vector<Scalar> weight(k, 0.0);
      for (const Arc& arc : graph.in[v]) {
        if (owner[arc.to] >= 0) weight[owner[arc.to]] += arc.weight;
      }
      int chosen = -1;
      for (int i = 0; i < k; ++i) {
        if (weight[i] > thresholds.xi[v]) {
          if (chosen < 0 || weight[i] > weight[chosen]) chosen = i;
        }
      }
      if (chosen >= 0) pending.emplace_back(v, chosen);
    }
    if (pending.empty()) break;
    for (const auto& [v, i] : pending) owner[v] = i;
    ++result.steps_used;
  }

  for (int v = 0; v < n; ++v) {
    if (owner[v] >= 0) result.activated_by[owner[v]].push_back(v);
  }
  return result;
}

namespace {

// Straightforward re-derivation of the business rules used to double-check
// run_auction: filter, sort, pay second price or the reserve.
struct SimpleResolution {
  std::vector<int> winner;
  std::vector<Scalar> payment;
  std::vector<std::vector<Scalar>> remaining_before;  // per seed, per agent
};

SimpleResolution resolve_simple(const Vector& prices, const Vector& budgets, const Matrix& bids) {
  const int k = static_cast<int>(bids.rows());
  const int l = static_cast<int>(bids.cols());
  SimpleResolution r;
  r.winner.assign(l, -1);
  r.payment.assign(l, 0.0);
  std::vector<Scalar> remaining(budgets.data(), budgets.data() + k);
  for (int j = 0; j < l; ++j) {
    r.remaining_before.push_back(remaining);
    std::vector<std::pair<Scalar, int>> effective;
    for (int i = 0; i < k; ++i) {
      if (bids(i, j) > prices[j] && bids(i, j) <= remaining[i]) effective.emplace_back(bids(i, j), i);
    }
    if (effective.empty()) continue;
    std::sort(effective.begin(), effective.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    r.winner[j] = effective[0].second;
    r.payment[j] = effective.size() >= 2 ? effective[1].first : prices[j];
    remaining[r.winner[j]] -= r.payment[j];
  }
  return r;
}

bool same_outcome(const AuctionOutcome& a, const AuctionOutcome& b) {
  return a.winner == b.winner && (a.payment.array() == b.payment.array()).all() &&
         (a.effective_prices.array() == b.effective_prices.array()).all() &&
         a.all_sold == b.all_sold;
}

std::string describe_bids(const Vector& prices, const Vector& budgets, const Matrix& bids) {
  std::ostringstream os;
  os << "prices=[" << prices.transpose() << "] budgets=[" << budgets.transpose() << "] bids=[";
  for (int i = 0; i < bids.rows(); ++i) os << bids.row(i) << "; ";
  os << "]";
  return os.str();
}

}  // namespace

OracleReport enumerate_auction(const Vector& prices, const Vector& budgets,
                               const std::vector<Scalar>& bid_grid) {
  OracleReport report;
  report.name = "auction enumeration";
  const int k = static_cast<int>(budgets.size());
  const int l = static_cast<int>(prices.size());
  const int cells = k * l;
  const std::size_t grid = bid_grid.size();

  double combos = std::pow(static_cast<double>(grid), cells);
  if (combos > 1e6) throw std::invalid_argument("enumerate_auction: grid too large");

  std::vector<std::size_t> odometer(cells, 0);
  Matrix bids = Matrix::Zero(k, l);
  AuctionState state{prices, budgets, 1};

  auto flag = [&](const std::string& what) {
    report.mismatches.push_back({report.trials, what + " at " + describe_bids(prices, budgets, bids)});
  };

  bool done = false;
  while (!done) {
    for (int c = 0; c < cells; ++c) bids(c / l, c % l) = bid_grid[odometer[c]];
    ++report.trials;

    const AuctionOutcome outcome = run_auction(state, bids);
    const SimpleResolution simple = resolve_simple(prices, budgets, bids);

    for (int j = 0; j < l; ++j) {
      if (outcome.winner[j] != simple.winner[j] || outcome.payment[j] != simple.payment[j]) {
        flag("winner/payment differs from independent resolution");
        break;
      }
    }
    // payment sandwich and winner effectiveness
    for (int j = 0; j < l; ++j) {
      if (outcome.winner[j] < 0) continue;
      const Scalar win_bid = bids(outcome.winner[j], j);
      if (!(outcome.payment[j] >= prices[j] && outcome.payment[j] <= win_bid)) {
        flag("payment sandwich violated");
      }
    }
    // budget feasibility
    for (int i = 0; i < k; ++i) {
      if (outcome.costs[i] > budgets[i] + 1e-12) flag("cost exceeds budget");
    }
    // seed sets disjoint: each seed has one owner by construction of winner,
    // so check the sets partition the sold seeds
    std::vector<int> seen(l, 0);
    for (int i = 0; i < k; ++i) {
      for (const int j : outcome.seed_sets[i]) {
        if (outcome.winner[j] != i || seen[j]++) flag("seed sets not disjoint");
      }
    }
    // noneffective-bid invariance: replacing a noneffective bid with any
    // grid value that stays noneffective must not change the outcome
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < l; ++j) {
        if (outcome.effective(i, j)) continue;
        for (const Scalar alt : bid_grid) {
          const bool alt_effective =
              alt > prices[j] && alt <= simple.remaining_before[j][static_cast<std::size_t>(i)];
          if (alt_effective || alt == bids(i, j)) continue;
          Matrix altered = bids;
          altered(i, j) = alt;
          if (!same_outcome(outcome, run_auction(state, altered))) {
            flag("noneffective bid altered the outcome");
          }
        }
      }
    }

    // advance odometer
    int c = 0;
    while (c < cells) {
      if (++odometer[c] < grid) break;
      odometer[c] = 0;
      ++c;
    }
    done = c == cells;
  }
  return report;
}

OracleReport grad_check(const std::function<Scalar(const Vector&)>& value,
                        const std::function<Vector(const Vector&)>& analytic_gradient,
                        const Vector& params, Scalar h, Scalar tol) {
  if (h <= 0.0) throw std::invalid_argument("grad_check: h must be positive");
  OracleReport report;
  report.name = "gradient check";
  const Vector analytic = analytic_gradient(params);
  Vector probe = params;
  for (long c = 0; c < params.size(); ++c) {
    ++report.trials;
    probe[c] = params[c] + h;
    const Scalar up = value(probe);
    probe[c] = params[c] - h;
    const Scalar down = value(probe);
    probe[c] = params[c];
    const Scalar fd = (up - down) / (2.0 * h);
    const Scalar denom = std::max({std::abs(fd), std::abs(analytic[c]), Scalar{1e-4}});
    const Scalar err = std::abs(fd - analytic[c]) / denom;
    report.max_error = std::max(report.max_error, err);
    if (err > tol) {
      std::ostringstream os;
      os << "coordinate " << c << ": analytic=" << analytic[c] << " fd=" << fd << " err=" << err;
      report.mismatches.push_back({c, os.str()});
    }
  }
  return report;
}

WeightedGraph random_small_graph(int max_nodes, Rng& rng) {
  WeightedGraph g;
  g.node_count = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_nodes)));
  g.directed = true;
  g.out.resize(g.node_count);
  g.in.resize(g.node_count);
  g.original_id.resize(g.node_count);
  for (int v = 0; v < g.node_count; ++v) g.original_id[v] = v;

  const bool dyadic = rng.uniform01() < 0.5;
  const Scalar density = rng.uniform(0.15, 0.5);
  for (int u = 0; u < g.node_count; ++u) {
    for (int v = 0; v < g.node_count; ++v) {
      if (u == v || rng.uniform01() >= density) continue;
      Scalar w;
      if (dyadic) {
        w = static_cast<Scalar>(1 + rng.below(16)) / 16.0;
      } else {
        w = rng.uniform(0.05, 1.0);
      }
      g.out[u].push_back({v, w});
      g.in[v].push_back({u, w});
    }
  }
  return g;
}

namespace {

std::string join_sets(const DiffusionResult& r) {
  std::ostringstream os;
  for (std::size_t i = 0; i < r.activated_by.size(); ++i) {
    os << "S" << i << "={";
    for (const int v : r.activated_by[i]) os << v << ",";
    os << "} ";
  }
  os << "steps=" << r.steps_used;
  return os.str();
}

}  // namespace

OracleReport diffusion_equivalence_suite(int trials, std::uint64_t seed) {
  OracleReport report;
  report.name = "diffusion equivalence";
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(RngLabel{seed, Stream::kOracle, 1, static_cast<std::uint64_t>(trial)});
    WeightedGraph g = random_small_graph(12, rng);
    const int k = 1 + static_cast<int>(rng.below(3));
    const int l = 1 + static_cast<int>(rng.below(std::min(4, g.node_count)));

    SeedSet seeds;
    std::vector<int> pool(g.node_count);
    for (int v = 0; v < g.node_count; ++v) pool[v] = v;
    for (int j = 0; j < l; ++j) {
      const auto pick = rng.below(pool.size());
      seeds.nodes.push_back(pool[pick]);
      pool.erase(pool.begin() + static_cast<long>(pick));
    }
    Allocation alloc;
    alloc.competitor_count = k;
    for (int j = 0; j < l; ++j) {
      // -1 (blocked) or one of the k competitors
      alloc.owner_of_seed.push_back(static_cast<int>(rng.below(k + 1)) - 1);
    }
    ThresholdDraw draw;
    draw.xi.resize(g.node_count);
    for (int v = 0; v < g.node_count; ++v) draw.xi[v] = rng.uniform01();
    const int t_up = rng.uniform01() < 0.3 ? 1 + static_cast<int>(rng.below(3)) : g.node_count;

    ++report.trials;
    const DiffusionResult fast = diffuse_clt(g, draw, seeds, alloc, t_up);
    const DiffusionResult slow = fixpoint_diffusion(g, draw, seeds, alloc, t_up);
    if (fast.activated_by != slow.activated_by || fast.steps_used != slow.steps_used) {
      report.mismatches.push_back({trial, "got " + join_sets(fast) + " want " + join_sets(slow) +
                                              " on " + describe_graph(g, draw, seeds, alloc, t_up)});
    }
  }
  return report;
}

OracleReport auction_property_suite() {
  OracleReport total;
  total.name = "auction properties";

  struct Case {
    std::vector<Scalar> prices, budgets, grid;
  };
  const std::vector<Case> cases = {
      // two bidders, two seeds
      {{1.0, 1.0}, {3.0, 3.0}, {0.0, 0.5, 1.1, 2.0}},
      {{1.0, 2.0}, {2.0, 3.0}, {0.0, 1.1, 2.1, 3.0}},
      {{1.2, 1.2}, {1.5, 1.5}, {0.0, 1.2, 1.3, 1.5}},
      // three bidders, two seeds
      {{1.0, 1.0}, {3.0, 2.0, 2.0}, {0.0, 0.6, 1.1, 2.0}},
      {{0.5, 1.5}, {2.0, 2.0, 2.0}, {0.0, 0.6, 1.6, 2.0}},
  };
  for (const Case& c : cases) {
    const Vector prices = Eigen::Map<const Vector>(c.prices.data(), static_cast<long>(c.prices.size()));
    const Vector budgets =
        Eigen::Map<const Vector>(c.budgets.data(), static_cast<long>(c.budgets.size()));
    OracleReport r = enumerate_auction(prices, budgets, c.grid);
    total.trials += r.trials;
    for (auto& m : r.mismatches) total.mismatches.push_back(std::move(m));
  }
  return total;
}

OracleReport gradient_check_suite(int networks, std::uint64_t seed) {
  OracleReport total;
  total.name = "gradient checks";
  const Scalar h = 1e-5;
  const Scalar tol = 1e-4;
  const Scalar margin = 1e-3;  // keep rectifier pre-activations away from 0

  for (int trial = 0; trial < networks; ++trial) {
    Rng rng(RngLabel{seed, Stream::kOracle, 2, static_cast<std::uint64_t>(trial)});

    LearnContext ctx;
    ctx.k = 2;
    ctx.l = 1 + static_cast<int>(rng.below(3));
    ctx.budgets = Vector::Constant(ctx.k, rng.uniform(1.0, 4.0));
    ctx.gamma = 0.95;
    ctx.centralized = rng.uniform01() < 0.5;
    const int hidden = 4 + static_cast<int>(rng.below(5));
    const std::size_t batch_size = 1 + rng.below(4);

    // resample until every rectifier stays clear of its kink on the batch
    std::vector<AgentNets> agents;
    std::vector<Transition> batch;
    bool ok = false;
    for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
      agents.clear();
      agents.emplace_back(ctx, hidden, 0.01, rng);
      agents.emplace_back(ctx, hidden, 0.01, rng);
      batch.clear();
      for (std::size_t s = 0; s < batch_size; ++s) {
        Transition t;
        t.joint_obs = Vector::NullaryExpr(static_cast<long>(ctx.k) * ctx.obs_dim(),
                                          [&](long) { return rng.uniform(0.0, 1.5); });
        t.joint_action = Vector::NullaryExpr(static_cast<long>(ctx.k) * ctx.action_dim(),
                                             [&](long) { return rng.uniform(0.0, 1.5); });
        t.joint_next_obs = Vector::NullaryExpr(static_cast<long>(ctx.k) * ctx.obs_dim(),
                                               [&](long) { return rng.uniform(0.0, 1.5); });
        t.rewards = Vector::NullaryExpr(ctx.k, [&](long) { return rng.uniform(0.0, 1.0); });
        t.terminal = rng.uniform01() < 0.25;
        batch.push_back(std::move(t));
      }
      ok = true;
      for (const Transition& t : batch) {
        for (int i = 0; i < ctx.k && ok; ++i) {
          Vector obs_i = ctx.agent_obs(t.joint_obs, i);
          const Vector raw = forward(agents[i].actor, obs_i);
          Vector own = t.joint_action;
          own.segment(static_cast<long>(i) * ctx.action_dim(), ctx.action_dim()) =
              raw * ctx.budgets[i];
          Vector x_stored(ctx.critic_input_dim());
          Vector x_actor(ctx.critic_input_dim());
          if (ctx.centralized) {
            x_stored << t.joint_obs, t.joint_action;
            x_actor << t.joint_obs, own;
          } else {
            x_stored << obs_i, ctx.agent_action(t.joint_action, i);
            x_actor << obs_i, ctx.agent_action(own, i);
          }
          ok = ok && min_hidden_preactivation(agents[i].actor, obs_i) > margin &&
               min_hidden_preactivation(agents[i].critic, x_stored) > margin &&
               min_hidden_preactivation(agents[i].critic, x_actor) > margin;
        }
      }
    }
    if (!ok) {
      total.mismatches.push_back({trial, "could not sample a kink-free instance"});
      continue;
    }

    std::vector<const Transition*> batch_view;
    for (const Transition& t : batch) batch_view.push_back(&t);
    const int i = static_cast<int>(rng.below(ctx.k));

    // critic loss wrt critic parameters
    {
      ++total.trials;
      auto value = [&](const Vector& p) {
        std::vector<AgentNets> probe = agents;
        probe[i].critic.unflatten(p);
        MlpGrads g(probe[i].critic);
        return critic_loss_and_grad(probe, i, batch_view, ctx, g);
      };
      auto gradient = [&](const Vector& p) {
        std::vector<AgentNets> probe = agents;
        probe[i].critic.unflatten(p);
        MlpGrads g(probe[i].critic);
        critic_loss_and_grad(probe, i, batch_view, ctx, g);
        return g.flatten();
      };
      OracleReport r = grad_check(value, gradient, agents[i].critic.flatten(), h, tol);
      total.max_error = std::max(total.max_error, r.max_error);
      if (!r.pass()) {
        total.mismatches.push_back({trial, "critic-loss gradient: " + r.mismatches[0].detail});
      }
    }
    // actor objective wrt actor parameters
    {
      ++total.trials;
      auto value = [&](const Vector& p) {
        std::vector<AgentNets> probe = agents;
        probe[i].actor.unflatten(p);
        MlpGrads g(probe[i].actor);
        return actor_objective_and_grad(probe, i, batch_view, ctx, g);
      };
      auto gradient = [&](const Vector& p) {
        std::vector<AgentNets> probe = agents;
        probe[i].actor.unflatten(p);
        MlpGrads g(probe[i].actor);
        actor_objective_and_grad(probe, i, batch_view, ctx, g);
        return g.flatten();
      };
      OracleReport r = grad_check(value, gradient, agents[i].actor.flatten(), h, tol);
      total.max_error = std::max(total.max_error, r.max_error);
      if (!r.pass()) {
        total.mismatches.push_back({trial, "actor-objective gradient: " + r.mismatches[0].detail});
      }
    }
    // critic value wrt its input
    {
      ++total.trials;
      Vector x0(ctx.critic_input_dim());
      if (ctx.centralized) {
        x0 << batch[0].joint_obs, batch[0].joint_action;
      } else {
        x0 << ctx.agent_obs(batch[0].joint_obs, i), ctx.agent_action(batch[0].joint_action, i);
      }
      auto value = [&](const Vector& x) { return forward(agents[i].critic, x)[0]; };
      auto gradient = [&](const Vector& x) { return input_gradient(agents[i].critic, x); };
      OracleReport r = grad_check(value, gradient, x0, h, tol);
      total.max_error = std::max(total.max_error, r.max_error);
      if (!r.pass()) {
        total.mismatches.push_back({trial, "critic input gradient: " + r.mismatches[0].detail});
      }
    }
  }
  return total;
}

OracleReport monotonicity_suite(int trials, std::uint64_t seed) {
  OracleReport report;
  report.name = "single-competitor monotonicity";
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(RngLabel{seed, Stream::kOracle, 3, static_cast<std::uint64_t>(trial)});
    WeightedGraph g = random_small_graph(12, rng);
    while (g.node_count < 2) g = random_small_graph(12, rng);

    ThresholdDraw draw;
    draw.xi.resize(g.node_count);
    for (int v = 0; v < g.node_count; ++v) draw.xi[v] = rng.uniform01();

    // grow T node by node, S is a strict prefix
    std::vector<int> pool(g.node_count);
    for (int v = 0; v < g.node_count; ++v) pool[v] = v;
    const int t_size = 2 + static_cast<int>(rng.below(g.node_count - 1));
    SeedSet big;
    for (int j = 0; j < t_size; ++j) {
      const auto pick = rng.below(pool.size());
      big.nodes.push_back(pool[pick]);
      pool.erase(pool.begin() + static_cast<long>(pick));
    }
    SeedSet small;
    const int s_size = static_cast<int>(rng.below(t_size));
    small.nodes.assign(big.nodes.begin(), big.nodes.begin() + s_size);

    ++report.trials;
    const int t_up = g.node_count;
    const int spread_small =
        small.size() == 0
            ? 0
            : spread(diffuse_clt(g, draw, small, Allocation::all_owned_by(0, small.size(), 1), t_up), 0);
    const int spread_big =
        spread(diffuse_clt(g, draw, big, Allocation::all_owned_by(0, big.size(), 1), t_up), 0);
    if (spread_small > spread_big) {
      std::ostringstream os;
      os << "spread(S)=" << spread_small << " > spread(T)=" << spread_big << " with |S|=" << s_size
         << " |T|=" << t_size << " trial=" << trial;
      report.mismatches.push_back({trial, os.str()});
    }
  }
  return report;
}

}  // namespace cbim::oracle
