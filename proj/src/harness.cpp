#include "cbim/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cbim {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Shortest round-trip decimal form, '.' separator.
std::string format_number(Scalar value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Scalar parse_number(const std::string& token, const std::string& where) {
  Scalar value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw DataError("csv: bad number '" + token + "' in " + where);
  }
  return value;
}

std::string percent(Scalar fraction) {
  std::ostringstream os;
  os.precision(4);
  os << fraction * 100.0 << "%";
  return os.str();
}

}  // namespace

std::string Summary::to_text() const {
  std::ostringstream os;
  os << "episodes=" << episodes << "\n";
  os << "win_win_episodes=" << win_win << "\n";
  os << "sold_out_episodes=" << sold_out << "\n";
  os << "fair_episodes=" << fair << "\n";
  os << "SR=" << percent(sr) << "\n";
  os << "SER=" << percent(ser) << "\n";
  os << "REV_max=" << format_number(rev_max) << "\n";
  os << "REV_avg=" << format_number(rev_avg) << "\n";
  os << "ROP_max=" << format_number(rop_max) << "\n";
  for (long i = 0; i < re.size(); ++i) {
    os << "RE_" << i + 1 << "=" << format_number(re[i]) << "\n";
  }
  for (long i = 0; i < cr.size(); ++i) {
    os << "CR_" << i + 1 << "=" << percent(cr[i]) << "\n";
  }
  os << "RT_seconds=" << format_number(rt_seconds) << "\n";
  return os.str();
}

Summary summarize(const std::vector<EpisodeRecord>& records, Scalar rho, SrMode sr_mode,
                  const Vector& budgets) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  const int k = static_cast<int>(records.front().rewards.size());
  if (budgets.size() != k) throw std::invalid_argument("summarize: budgets do not match agents");

  Summary s;
  s.episodes = static_cast<long>(records.size());
  s.re = Vector::Zero(k);
  s.cr = Vector::Zero(k);
  Scalar wall_ms = 0.0;
  Scalar sold_revenue = 0.0;
  for (const EpisodeRecord& r : records) {
    const bool fair = r.ge <= rho;
    const bool win_win = sr_mode == SrMode::kSoldAndFair ? (r.all_sold && fair) : r.all_sold;
    s.win_win += win_win ? 1 : 0;
    s.sold_out += r.all_sold ? 1 : 0;
    s.fair += fair ? 1 : 0;
    s.rev_max = std::max(s.rev_max, r.revenue);
    if (r.all_sold) sold_revenue += r.revenue;
    if (fair) s.rop_max = std::max(s.rop_max, r.revenue);
    s.re += r.rewards;
    s.cr += r.costs.cwiseQuotient(budgets);
    wall_ms += r.wall_ms;
  }
  const Scalar n = static_cast<Scalar>(s.episodes);
  s.sr = static_cast<Scalar>(s.win_win) / n;
  s.ser = static_cast<Scalar>(s.fair) / n;
  s.rev_avg = s.sold_out > 0 ? sold_revenue / static_cast<Scalar>(s.sold_out) : 0.0;
  s.re /= n;
  s.cr /= n;
  s.rt_seconds = wall_ms / 1000.0;
  return s;
}

void write_episode_csv(const std::string& path, const std::vector<EpisodeRecord>& records, int k,
                       int l) {
  std::ofstream out(path);
  if (!out) throw DataError("csv: cannot write " + path);

  out << "iteration,round";
  for (int j = 1; j <= l; ++j) out << ",price_" << j;
  for (int i = 1; i <= k; ++i) out << ",reward_" << i;
  for (int i = 1; i <= k; ++i) out << ",cost_" << i;
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= l; ++j) out << ",g_" << i << "_" << j;
  }
  out << ",ge,revenue,all_sold,fair,wall_ms\n";

  for (const EpisodeRecord& r : records) {
    out << r.iteration << "," << r.round;
    for (int j = 0; j < l; ++j) out << "," << format_number(r.prices[j]);
    for (int i = 0; i < k; ++i) out << "," << format_number(r.rewards[i]);
    for (int i = 0; i < k; ++i) out << "," << format_number(r.costs[i]);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < l; ++j) out << "," << format_number(r.effective(i, j));
    }
    out << "," << format_number(r.ge) << "," << format_number(r.revenue) << ","
        << (r.all_sold ? 1 : 0) << "," << (r.fair ? 1 : 0) << "," << format_number(r.wall_ms)
        << "\n";
  }
  if (!out) throw DataError("csv: write failed for " + path);
}

std::vector<EpisodeRecord> read_episode_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("csv: cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw DataError("csv: empty file " + path);

  // infer k and l from the header
  int k = 0, l = 0;
  {
    std::stringstream fields(header);
    std::string name;
    while (std::getline(fields, name, ',')) {
      if (name.rfind("price_", 0) == 0) ++l;
      if (name.rfind("reward_", 0) == 0) ++k;
    }
    if (k == 0 || l == 0) throw DataError("csv: unrecognized header in " + path);
  }

  std::vector<EpisodeRecord> records;
  std::string line;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream fields(line);
    std::string token;
    std::vector<std::string> cells;
    while (std::getline(fields, token, ',')) cells.push_back(token);
    const std::size_t expected = 2 + l + 2 * k + static_cast<std::size_t>(k) * l + 5;
    const std::string where = path + ":" + std::to_string(line_no);
    if (cells.size() != expected) throw DataError("csv: wrong column count in " + where);

    EpisodeRecord r;
    std::size_t at = 0;
    r.iteration = static_cast<int>(parse_number(cells[at++], where));
    r.round = static_cast<int>(parse_number(cells[at++], where));
    r.prices.resize(l);
    for (int j = 0; j < l; ++j) r.prices[j] = parse_number(cells[at++], where);
    r.rewards.resize(k);
    for (int i = 0; i < k; ++i) r.rewards[i] = parse_number(cells[at++], where);
    r.costs.resize(k);
    for (int i = 0; i < k; ++i) r.costs[i] = parse_number(cells[at++], where);
    r.effective.resize(k, l);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < l; ++j) r.effective(i, j) = parse_number(cells[at++], where);
    }
    r.ge = parse_number(cells[at++], where);
    r.revenue = parse_number(cells[at++], where);
    r.all_sold = parse_number(cells[at++], where) != 0.0;
    r.fair = parse_number(cells[at++], where) != 0.0;
    r.wall_ms = parse_number(cells[at++], where);
    records.push_back(std::move(r));
  }
  return records;
}

Vector RandomBidding::bids(int agent, const Vector&, Scalar, Rng& rng) const {
  return random_policy(budgets_[agent], seed_count_, rng);
}

Vector ActorBidding::bids(int agent, const Vector& observation, Scalar noise_std, Rng& rng) const {
  return act((*agents_)[agent].actor, observation, budgets_[agent], noise_std, rng);
}

Vector ScriptedBidding::bids(int agent, const Vector&, Scalar, Rng&) const {
  return rounds_.at(at_).row(agent).transpose();
}

EpisodeRecord run_round(BiddingEnvironment& env, const BiddingPolicy& policy, int iteration,
                        int round, bool terminal, Scalar noise_std, std::uint64_t master_seed,
                        Scalar rho, bool normalize_rewards, Transition* transition_out) {
  const auto start = Clock::now();
  const int k = env.competitor_count();
  const int l = env.seed_count();

  const Vector joint_obs = env.joint_observation();
  BidMatrix bids(k, l);
  for (int i = 0; i < k; ++i) {
    Rng rng(RngLabel{master_seed, Stream::kExploration, static_cast<std::uint64_t>(iteration),
                     static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(i)});
    bids.row(i) = policy.bids(i, env.observation(i), noise_std, rng).transpose();
  }

  const ThresholdDraw thresholds = sample_thresholds(
      env.graph(), RngLabel{master_seed, Stream::kThresholds, static_cast<std::uint64_t>(iteration),
                            static_cast<std::uint64_t>(round)});
  const Vector prices_before = env.prices();
  const auto result = env.step(bids, thresholds);

  EpisodeRecord record;
  record.iteration = iteration;
  record.round = round;
  record.prices = prices_before;
  record.rewards = result.rewards;
  record.costs = result.auction.costs;
  record.effective = result.auction.effective_prices;
  record.ge = result.ge;
  record.revenue = result.rewards.sum();
  record.all_sold = result.auction.all_sold;
  record.fair = result.ge <= rho;

  if (transition_out != nullptr) {
    transition_out->joint_obs = joint_obs;
    transition_out->joint_action = Vector(static_cast<long>(k) * l);
    for (int i = 0; i < k; ++i) {
      transition_out->joint_action.segment(static_cast<long>(i) * l, l) = bids.row(i).transpose();
    }
    transition_out->rewards =
        normalize_rewards ? Vector(result.rewards / static_cast<Scalar>(env.graph().node_count))
                          : result.rewards;
    transition_out->joint_next_obs = env.joint_observation();
    transition_out->terminal = terminal;
  }

  record.wall_ms = elapsed_ms(start);
  return record;
}

namespace {

struct ExperimentSetup {
  WeightedGraph graph;
  SeedSet seeds;
  Vector budgets;
};

ExperimentSetup prepare(const ExperimentConfig& config) {
  config.validate();
  ExperimentSetup setup;
  setup.graph = assign_weights(load_edge_list(config.dataset, config.directed));
  setup.seeds = select_seeds_by_degree(setup.graph, config.l);
  setup.budgets = config.resolved_budgets();
  return setup;
}

Scalar annealed_noise(const ExperimentConfig& config, long episode_index) {
  const long total = config.total_episodes();
  if (total <= 1) return config.noise_start;
  const Scalar progress = static_cast<Scalar>(episode_index - 1) / static_cast<Scalar>(total - 1);
  return config.noise_start + (config.noise_end - config.noise_start) * progress;
}

RunArtifacts run_experiment(const ExperimentConfig& config, std::vector<AgentNets>* agents,
                            const LearnContext* ctx, bool learn, Scalar fixed_noise,
                            const std::string& out_prefix) {
  const ExperimentSetup setup = prepare(config);
  BiddingEnvironment env(&setup.graph, setup.seeds, setup.budgets, config.kappa, config.omega,
                         config.t_up, config.reward_mode);

  std::unique_ptr<BiddingPolicy> policy;
  if (agents != nullptr) {
    policy = std::make_unique<ActorBidding>(agents, setup.budgets);
  } else {
    policy = std::make_unique<RandomBidding>(setup.budgets, config.l);
  }

  ReplayBuffer buffer(static_cast<std::size_t>(config.buffer_capacity));
  std::vector<EpisodeRecord> records;
  records.reserve(static_cast<std::size_t>(config.total_episodes()));
  std::uint64_t transitions = 0;
  std::uint64_t ticks = 0;

  for (int iteration = 1; iteration <= config.iterations; ++iteration) {
    env.reset();
    for (int round = 1; round <= config.rounds; ++round) {
      const long episode = static_cast<long>(iteration - 1) * config.rounds + round;
      const Scalar noise = learn ? annealed_noise(config, episode) : fixed_noise;
      Transition transition;
      EpisodeRecord record =
          run_round(env, *policy, iteration, round, round == config.rounds, noise, config.seed,
                    config.rho, config.normalize_rewards, &transition);

      if (learn && agents != nullptr) {
        buffer.push(std::move(transition));
        ++transitions;
        if (transitions % static_cast<std::uint64_t>(config.update_every) == 0 &&
            buffer.size() >= static_cast<std::size_t>(config.batch_size)) {
          ++ticks;
          for (int i = 0; i < ctx->k; ++i) {
            Rng sample_rng(RngLabel{config.seed, Stream::kReplaySample, ticks,
                                    static_cast<std::uint64_t>(i)});
            const auto batch = buffer.sample(static_cast<std::size_t>(config.batch_size), sample_rng);
            critic_update(*agents, i, batch, *ctx);
            actor_update(*agents, i, batch, *ctx);
            soft_update((*agents)[i].critic, (*agents)[i].critic_target, config.tau);
            soft_update((*agents)[i].actor, (*agents)[i].actor_target, config.tau);
            if (!(*agents)[i].all_finite()) {
              throw NumericError("training diverged: non-finite parameters for agent " +
                                 std::to_string(i + 1) + " at episode " + std::to_string(episode));
            }
          }
        }
      }
      records.push_back(std::move(record));
    }
  }

  RunArtifacts artifacts;
  artifacts.csv_path = out_prefix + ".csv";
  artifacts.summary_path = out_prefix + ".summary.txt";
  const auto parent = std::filesystem::path(out_prefix).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  write_episode_csv(artifacts.csv_path, records, config.k, config.l);
  artifacts.summary = summarize(records, config.rho, config.sr_mode, setup.budgets);

  if (learn) {
    Checkpoint ckpt;
    ckpt.algorithm = config.algorithm;
    ckpt.k = config.k;
    ckpt.l = config.l;
    ckpt.hidden = config.hidden;
    ckpt.master_seed = config.seed;
    ckpt.iterations_done = static_cast<std::uint64_t>(config.iterations);
    ckpt.episodes_done = static_cast<std::uint64_t>(config.total_episodes());
    ckpt.transitions_stored = transitions;
    ckpt.update_ticks = ticks;
    if (agents != nullptr) {
      for (const AgentNets& a : *agents) {
        ckpt.agent_params.push_back(
            {a.actor.flatten(), a.critic.flatten(), a.actor_target.flatten(),
             a.critic_target.flatten()});
      }
    }
    artifacts.checkpoint_path = out_prefix + ".ckpt";
    save_checkpoint(artifacts.checkpoint_path, ckpt);
  }

  std::ofstream summary_file(artifacts.summary_path);
  if (!summary_file) throw DataError("cannot write " + artifacts.summary_path);
  summary_file << artifacts.summary.to_text();
  return artifacts;
}

LearnContext make_context(const ExperimentConfig& config, const Vector& budgets) {
  LearnContext ctx;
  ctx.k = config.k;
  ctx.l = config.l;
  ctx.budgets = budgets;
  ctx.gamma = config.gamma;
  ctx.centralized = config.algorithm == Algorithm::kMcbim;
  return ctx;
}

std::vector<AgentNets> make_agents(const ExperimentConfig& config, const LearnContext& ctx) {
  std::vector<AgentNets> agents;
  for (int i = 0; i < ctx.k; ++i) {
    Rng rng(RngLabel{config.seed, Stream::kParamInit, static_cast<std::uint64_t>(i)});
    agents.emplace_back(ctx, config.hidden, config.learning_rate, rng);
  }
  return agents;
}

}  // namespace

RunArtifacts train(const ExperimentConfig& config) {
  config.validate();
  if (config.algorithm == Algorithm::kRandom) {
    return run_experiment(config, nullptr, nullptr, true, 0.0, config.out);
  }
  const Vector budgets = config.resolved_budgets();
  LearnContext ctx = make_context(config, budgets);
  std::vector<AgentNets> agents = make_agents(config, ctx);
  return run_experiment(config, &agents, &ctx, true, 0.0, config.out);
}

RunArtifacts evaluate(const ExperimentConfig& config, const std::string& checkpoint_path) {
  config.validate();
  const Checkpoint ckpt = load_checkpoint(checkpoint_path);
  if (ckpt.k != config.k || ckpt.l != config.l) {
    throw DataError("evaluate: checkpoint shape (k=" + std::to_string(ckpt.k) +
                    ", l=" + std::to_string(ckpt.l) + ") does not match config");
  }
  if (ckpt.algorithm != config.algorithm) {
    throw DataError("evaluate: checkpoint algorithm " + to_string(ckpt.algorithm) +
                    " does not match config " + to_string(config.algorithm));
  }
  const std::string out_prefix = config.out + ".eval";
  if (config.algorithm == Algorithm::kRandom) {
    return run_experiment(config, nullptr, nullptr, false, 0.0, out_prefix);
  }

  ExperimentConfig shaped = config;
  shaped.hidden = ckpt.hidden;
  const Vector budgets = shaped.resolved_budgets();
  LearnContext ctx = make_context(shaped, budgets);
  std::vector<AgentNets> agents = make_agents(shaped, ctx);
  if (ckpt.agent_params.size() != static_cast<std::size_t>(ctx.k)) {
    throw DataError("evaluate: checkpoint agent count mismatch");
  }
  for (int i = 0; i < ctx.k; ++i) {
    const auto& nets = ckpt.agent_params[static_cast<std::size_t>(i)];
    if (nets.size() != 4) throw DataError("evaluate: malformed checkpoint params");
    agents[static_cast<std::size_t>(i)].actor.unflatten(nets[0]);
    agents[static_cast<std::size_t>(i)].critic.unflatten(nets[1]);
    agents[static_cast<std::size_t>(i)].actor_target.unflatten(nets[2]);
    agents[static_cast<std::size_t>(i)].critic_target.unflatten(nets[3]);
  }
  return run_experiment(shaped, &agents, &ctx, false, 0.0, out_prefix);
}

}  // namespace cbim
