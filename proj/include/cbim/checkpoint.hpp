#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbim/config.hpp"
#include "cbim/marl.hpp"

namespace cbim {

// Everything needed to freeze or resume an experiment's learners: all
// agents' online and target parameters plus the RNG cursor (the counters
// from which every labeled stream position can be re-derived).
struct Checkpoint {
  Algorithm algorithm = Algorithm::kRandom;
  int k = 0;
  int l = 0;
  int hidden = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t iterations_done = 0;
  std::uint64_t episodes_done = 0;
  std::uint64_t transitions_stored = 0;
  std::uint64_t update_ticks = 0;
  // Per agent: actor, critic, actor target, critic target (flat); empty for
  // the random baseline.
  std::vector<std::vector<Vector>> agent_params;
};

// Single binary file, fixed little-endian 64-bit float layout.
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace cbim
