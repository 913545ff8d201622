#include "cbim/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cbim/graph.hpp"

namespace cbim {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kMcbim: return "mcbim";
    case Algorithm::kIddpg: return "iddpg";
    case Algorithm::kRandom: return "random";
  }
  return "?";
}

std::string to_string(RewardMode m) {
  return m == RewardMode::kExactClt ? "exact-clt" : "degree-proxy";
}

std::string to_string(SrMode m) {
  return m == SrMode::kSoldAndFair ? "sold-and-fair" : "sold-only";
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": " + value);
}

template <typename T>
T parse_number(const std::string& value, const std::string& key) {
  std::istringstream in(value);
  T out{};
  if (!(in >> out) || !in.eof()) {
    throw std::invalid_argument("config: bad value for " + key + ": " + value);
  }
  return out;
}

}  // namespace

Vector ExperimentConfig::resolved_budgets() const {
  Scalar uniform = 0.0;
  if (budgets == "(l+1)/2") {
    uniform = static_cast<Scalar>(l + 1) / 2.0;
  } else if (budgets == "l/2") {
    uniform = static_cast<Scalar>(l) / 2.0;
  } else {
    std::vector<Scalar> values;
    std::stringstream in(budgets);
    std::string item;
    while (std::getline(in, item, ',')) {
      values.push_back(parse_number<Scalar>(trim(item), "budgets"));
    }
    if (static_cast<int>(values.size()) != k) {
      throw std::invalid_argument("config: budgets list must have k entries");
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<long>(values.size()));
  }
  return Vector::Constant(k, uniform);
}

void ExperimentConfig::validate() const {
  if (k < 2) throw std::invalid_argument("config: k must be >= 2");
  if (l < 1) throw std::invalid_argument("config: l must be >= 1");
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("config: rho must lie in (0,1)");
  if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("config: kappa must lie in (0,1)");
  if (omega == 0.0 || omega == 1.0) throw std::invalid_argument("config: omega must not be 0 or 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("config: gamma must lie in (0,1]");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("config: tau must lie in (0,1]");
  if (iterations < 1 || rounds < 1) throw std::invalid_argument("config: N and T must be >= 1");
  if (learning_rate <= 0.0) throw std::invalid_argument("config: learning rate must be positive");
  if (buffer_capacity < 1) throw std::invalid_argument("config: buffer capacity must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("config: batch size must be >= 1");
  if (update_every < 1) throw std::invalid_argument("config: update-every must be >= 1");
  if (noise_start < 0.0 || noise_end < 0.0) {
    throw std::invalid_argument("config: noise levels must be >= 0");
  }
  if (hidden < 1) throw std::invalid_argument("config: hidden width must be >= 1");
  if (t_up < 0) throw std::invalid_argument("config: t_up must be >= 0");
  if (dataset.empty()) throw std::invalid_argument("config: dataset path required");
  const Vector b = resolved_budgets();
  if ((b.array() <= 0.0).any()) throw std::invalid_argument("config: budgets must be positive");
}

void apply_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "dataset") c.dataset = value;
  else if (key == "directed") c.directed = parse_bool(value, key);
  else if (key == "k") c.k = parse_number<int>(value, key);
  else if (key == "l") c.l = parse_number<int>(value, key);
  else if (key == "budgets") c.budgets = value;
  else if (key == "iterations") c.iterations = parse_number<int>(value, key);
  else if (key == "rounds") c.rounds = parse_number<int>(value, key);
  else if (key == "rho") c.rho = parse_number<Scalar>(value, key);
  else if (key == "omega") c.omega = parse_number<Scalar>(value, key);
  else if (key == "kappa") c.kappa = parse_number<Scalar>(value, key);
  else if (key == "t_up") c.t_up = parse_number<int>(value, key);
  else if (key == "gamma") c.gamma = parse_number<Scalar>(value, key);
  else if (key == "tau") c.tau = parse_number<Scalar>(value, key);
  else if (key == "learning_rate") c.learning_rate = parse_number<Scalar>(value, key);
  else if (key == "buffer_capacity") c.buffer_capacity = parse_number<long>(value, key);
  else if (key == "batch_size") c.batch_size = parse_number<int>(value, key);
  else if (key == "update_every") c.update_every = parse_number<int>(value, key);
  else if (key == "noise_start") c.noise_start = parse_number<Scalar>(value, key);
  else if (key == "noise_end") c.noise_end = parse_number<Scalar>(value, key);
  else if (key == "hidden") c.hidden = parse_number<int>(value, key);
  else if (key == "normalize_rewards") c.normalize_rewards = parse_bool(value, key);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(value, key);
  else if (key == "out") c.out = value;
  else if (key == "algorithm") {
    if (value == "mcbim") c.algorithm = Algorithm::kMcbim;
    else if (value == "iddpg") c.algorithm = Algorithm::kIddpg;
    else if (value == "random") c.algorithm = Algorithm::kRandom;
    else throw std::invalid_argument("config: unknown algorithm: " + value);
  } else if (key == "reward_mode") {
    if (value == "exact-clt") c.reward_mode = RewardMode::kExactClt;
    else if (value == "degree-proxy") c.reward_mode = RewardMode::kDegreeProxy;
    else throw std::invalid_argument("config: unknown reward_mode: " + value);
  } else if (key == "sr_mode") {
    if (value == "sold-and-fair") c.sr_mode = SrMode::kSoldAndFair;
    else if (value == "sold-only") c.sr_mode = SrMode::kSoldOnly;
    else throw std::invalid_argument("config: unknown sr_mode: " + value);
  } else {
    throw std::invalid_argument("config: unknown key: " + key);
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw DataError("config: cannot open " + path);
  ExperimentConfig config;
  std::string line;
  long line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    try {
      apply_key(config, key, value);
    } catch (const std::invalid_argument& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

}  // namespace cbim
