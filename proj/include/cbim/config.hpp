#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "cbim/types.hpp"

namespace cbim {

enum class Algorithm { kMcbim, kIddpg, kRandom };
enum class RewardMode { kExactClt, kDegreeProxy };
enum class SrMode { kSoldAndFair, kSoldOnly };

std::string to_string(Algorithm a);
std::string to_string(RewardMode m);
std::string to_string(SrMode m);

struct ExperimentConfig {
  std::string dataset;
  bool directed = false;
  int k = 2;
  int l = 5;
  std::string budgets = "(l+1)/2";  // comma list, or the rules "(l+1)/2" / "l/2"
  int iterations = 50;              // N
  int rounds = 200;                 // T, rounds per iteration
  Scalar rho = 0.1;
  Scalar omega = 2.0;
  Scalar kappa = 0.3;
  int t_up = 0;  // 0 = diffuse to the fixed point (node count)
  Scalar gamma = 0.95;
  Scalar tau = 0.01;
  Scalar learning_rate = 0.01;
  long buffer_capacity = 1'000'000;
  int batch_size = 1024;
  int update_every = 40;
  Scalar noise_start = 0.2;  // exploration stddev as a budget fraction
  Scalar noise_end = 0.02;   // linearly annealed over the run
  int hidden = 64;
  bool normalize_rewards = true;  // feed sigma/n to learning, report raw sigma
  Algorithm algorithm = Algorithm::kMcbim;
  RewardMode reward_mode = RewardMode::kExactClt;
  SrMode sr_mode = SrMode::kSoldAndFair;
  std::uint64_t seed = 0;
  std::string out = "run";

  int total_episodes() const { return iterations * rounds; }
  Vector resolved_budgets() const;  // evaluates the budget rule against k, l
  void validate() const;            // throws std::invalid_argument
};

// Flat key=value file with '#' comments. Unknown keys are an error.
ExperimentConfig load_config(const std::string& path);
void apply_key(ExperimentConfig& config, const std::string& key, const std::string& value);

}  // namespace cbim
