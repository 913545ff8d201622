#pragma once

#include <cstdint>
#include <random>

namespace cbim {

// SplitMix64 mixing step, used to fold label words into stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent random streams derived from one master seed. Every consumer
// of randomness names its stream, so adding or reordering consumers never
// perturbs the others.
enum class Stream : std::uint64_t {
  kThresholds = 1,
  kExploration = 2,
  kParamInit = 3,
  kReplaySample = 4,
  kRandomPolicy = 5,
  kOracle = 6,
  kSynthetic = 7,
};

struct RngLabel {
  std::uint64_t master = 0;
  Stream stream = Stream::kOracle;
  std::uint64_t a = 0;  // typically iteration
  std::uint64_t b = 0;  // typically round
  std::uint64_t c = 0;  // typically agent / trial index

  std::uint64_t seed() const {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
  }
};

// Deterministic generator; identical seeds give identical draw sequences on
// every platform (the uniform and normal transforms are implemented here
// rather than taken from <random>, whose distributions are
// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  explicit Rng(const RngLabel& label) : gen_(label.seed()) {}

  std::uint64_t bits() { return gen_(); }

  // Uniform in [0,1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  // Standard normal via Box-Muller; the paired value is cached.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cbim
