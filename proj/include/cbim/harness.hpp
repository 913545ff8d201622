#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cbim/checkpoint.hpp"
#include "cbim/config.hpp"
#include "cbim/env.hpp"
#include "cbim/marl.hpp"

namespace cbim {

// Raised when learned parameters leave the finite range.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One bidding round = one episode.
struct EpisodeRecord {
  int iteration = 0;  // 1-based
  int round = 0;      // 1-based within the iteration
  Vector prices;      // starting prices used this round
  Vector rewards;     // raw spread per agent
  Vector costs;       // per agent
  Matrix effective;   // k x l effective bidding prices
  Scalar ge = 0.0;
  Scalar revenue = 0.0;
  bool all_sold = false;
  bool fair = false;  // ge <= rho
  Scalar wall_ms = 0.0;
};

struct Summary {
  long episodes = 0;
  long win_win = 0;   // counted per sr_mode
  long sold_out = 0;  // all seeds sold
  long fair = 0;      // ge <= rho
  Scalar sr = 0.0;    // win_win / episodes
  Scalar ser = 0.0;   // fair / episodes
  Scalar rev_max = 0.0;  // over all episodes
  Scalar rev_avg = 0.0;  // over sold-out episodes
  Scalar rop_max = 0.0;  // max revenue among fair episodes, <= rev_max
  Vector re;             // mean reward per agent, all episodes
  Vector cr;             // mean cost/budget per agent
  Scalar rt_seconds = 0.0;

  std::string to_text() const;
};

Summary summarize(const std::vector<EpisodeRecord>& records, Scalar rho, SrMode sr_mode,
                  const Vector& budgets);

// Episode CSV: shortest round-trip number formatting so a re-read
// reproduces every value bit for bit. wall_ms is the last column and is the
// only nondeterministic one.
void write_episode_csv(const std::string& path, const std::vector<EpisodeRecord>& records, int k,
                       int l);
std::vector<EpisodeRecord> read_episode_csv(const std::string& path);

// A bidding policy maps an agent's observation to sealed bids.
class BiddingPolicy {
 public:
  virtual ~BiddingPolicy() = default;
  virtual Vector bids(int agent, const Vector& observation, Scalar noise_std, Rng& rng) const = 0;
};

class RandomBidding : public BiddingPolicy {
 public:
  RandomBidding(Vector budgets, int seed_count)
      : budgets_(std::move(budgets)), seed_count_(seed_count) {}
  Vector bids(int agent, const Vector& observation, Scalar noise_std, Rng& rng) const override;

 private:
  Vector budgets_;
  int seed_count_;
};

class ActorBidding : public BiddingPolicy {
 public:
  ActorBidding(const std::vector<AgentNets>* agents, Vector budgets)
      : agents_(agents), budgets_(std::move(budgets)) {}
  Vector bids(int agent, const Vector& observation, Scalar noise_std, Rng& rng) const override;

 private:
  const std::vector<AgentNets>* agents_;
  Vector budgets_;
};

// Replays a fixed per-round bid matrix; for tests and hand traces.
class ScriptedBidding : public BiddingPolicy {
 public:
  explicit ScriptedBidding(std::vector<BidMatrix> rounds) : rounds_(std::move(rounds)) {}
  Vector bids(int agent, const Vector& observation, Scalar noise_std, Rng& rng) const override;
  void advance() { ++at_; }

 private:
  std::vector<BidMatrix> rounds_;
  std::size_t at_ = 0;
};

// One full bidding round: agents act from their observations, the
// environment resolves auction and diffusion, and the joint transition is
// assembled for the replay buffer. `terminal` marks the last round of an
// iteration.
EpisodeRecord run_round(BiddingEnvironment& env, const BiddingPolicy& policy, int iteration,
                        int round, bool terminal, Scalar noise_std, std::uint64_t master_seed,
                        Scalar rho, bool normalize_rewards, Transition* transition_out);

struct RunArtifacts {
  std::string csv_path;
  std::string summary_path;
  std::string checkpoint_path;  // empty for evaluate
  Summary summary;
};

// Full training per the experiment config: N iterations of T rounds,
// environment re-initialized each iteration, learning updates on the
// configured cadence, CSV/summary/checkpoint emitted under config.out.
RunArtifacts train(const ExperimentConfig& config);

// Frozen-policy evaluation: loads the checkpoint, runs with zero noise and
// no learning.
RunArtifacts evaluate(const ExperimentConfig& config, const std::string& checkpoint_path);

}  // namespace cbim
