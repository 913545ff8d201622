#include "cbim/cli.hpp"

#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "cbim/harness.hpp"
#include "cbim/oracle.hpp"

namespace cbim::cli {

namespace {

constexpr int kOk = 0;
constexpr int kUsageError = 1;
constexpr int kDataError = 2;
constexpr int kNumericError = 3;

// Config-file keys that may be overridden from the command line.
struct Overrides {
  std::vector<std::pair<std::string, std::string>> pairs;

  void add_flag_options(CLI::App& cmd) {
    static const char* keys[] = {
        "dataset",    "directed",      "k",           "l",           "budgets",
        "iterations", "rounds",        "rho",         "omega",       "kappa",
        "t_up",       "gamma",         "tau",         "learning_rate",
        "buffer_capacity", "batch_size", "update_every", "noise_start",
        "noise_end",  "hidden",        "normalize_rewards", "algorithm",
        "reward_mode", "sr_mode",      "out",
    };
    for (const char* key : keys) {
      cmd.add_option_function<std::string>(
          std::string("--") + key,
          [this, key](const std::string& value) { pairs.emplace_back(key, value); },
          "override config key " + std::string(key));
    }
  }

  void apply(ExperimentConfig& config) const {
    for (const auto& [key, value] : pairs) apply_key(config, key, value);
  }
};

int print_report(const oracle::OracleReport& report) {
  std::cout << report.name << ": " << (report.pass() ? "ok" : "FAILED") << " (" << report.trials
            << " trials";
  if (report.max_error > 0.0) std::cout << ", max error " << report.max_error;
  std::cout << ")\n";
  for (std::size_t i = 0; i < report.mismatches.size() && i < 5; ++i) {
    std::cout << "  mismatch trial " << report.mismatches[i].trial << ": "
              << report.mismatches[i].detail << "\n";
  }
  return report.pass() ? 0 : 1;
}

void print_summary(const Summary& summary) { std::cout << summary.to_text(); }

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Competitive-bidding influence-maximization engine"};
  app.require_subcommand(1);

  // train
  auto* train_cmd = app.add_subcommand("train", "train bidding policies");
  std::string train_config_path;
  std::uint64_t train_seed = 0;
  Overrides train_overrides;
  train_cmd->add_option("--config", train_config_path, "config file")->required();
  train_cmd->add_option("--seed", train_seed, "master seed")->required();
  train_overrides.add_flag_options(*train_cmd);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "run a frozen checkpoint with zero noise");
  std::string eval_config_path, eval_ckpt_path;
  std::optional<std::uint64_t> eval_seed;
  Overrides eval_overrides;
  eval_cmd->add_option("--config", eval_config_path, "config file")->required();
  eval_cmd->add_option("--ckpt", eval_ckpt_path, "checkpoint file")->required();
  eval_cmd->add_option("--seed", eval_seed, "master seed (defaults to config seed)");
  eval_overrides.add_flag_options(*eval_cmd);

  // summarize
  auto* summarize_cmd = app.add_subcommand("summarize", "recompute summary metrics from a CSV");
  std::string summarize_csv;
  double summarize_rho = 0.1;
  std::string summarize_sr_mode = "sold-and-fair";
  std::string summarize_budgets;
  summarize_cmd->add_option("csv", summarize_csv, "episode CSV")->required();
  summarize_cmd->add_option("--rho", summarize_rho, "fairness threshold");
  summarize_cmd->add_option("--sr-mode", summarize_sr_mode, "sold-and-fair | sold-only");
  summarize_cmd->add_option("--budgets", summarize_budgets,
                            "comma-separated budgets for the cost-ratio metric");

  // oracle-check
  auto* oracle_cmd = app.add_subcommand("oracle-check", "run the brute-force oracle suites");
  int oracle_trials = 1000;
  std::uint64_t oracle_seed = 20230608;
  oracle_cmd->add_option("--trials", oracle_trials, "diffusion trials");
  oracle_cmd->add_option("--seed", oracle_seed, "suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*train_cmd) {
      ExperimentConfig config = load_config(train_config_path);
      train_overrides.apply(config);
      config.seed = train_seed;
      const RunArtifacts artifacts = train(config);
      std::cout << "wrote " << artifacts.csv_path << ", " << artifacts.summary_path << ", "
                << artifacts.checkpoint_path << "\n";
      print_summary(artifacts.summary);
      return kOk;
    }
    if (*eval_cmd) {
      ExperimentConfig config = load_config(eval_config_path);
      eval_overrides.apply(config);
      if (eval_seed) config.seed = *eval_seed;
      const RunArtifacts artifacts = evaluate(config, eval_ckpt_path);
      std::cout << "wrote " << artifacts.csv_path << ", " << artifacts.summary_path << "\n";
      print_summary(artifacts.summary);
      return kOk;
    }
    if (*summarize_cmd) {
      const auto records = read_episode_csv(summarize_csv);
      SrMode mode;
      if (summarize_sr_mode == "sold-and-fair") {
        mode = SrMode::kSoldAndFair;
      } else if (summarize_sr_mode == "sold-only") {
        mode = SrMode::kSoldOnly;
      } else {
        std::cerr << "unknown --sr-mode: " << summarize_sr_mode << "\n";
        return kUsageError;
      }
      const int k = static_cast<int>(records.front().rewards.size());
      Vector budgets = Vector::Ones(k);
      if (!summarize_budgets.empty()) {
        ExperimentConfig shape;
        shape.k = k;
        shape.budgets = summarize_budgets;
        budgets = shape.resolved_budgets();
      }
      print_summary(summarize(records, summarize_rho, mode, budgets));
      return kOk;
    }
    if (*oracle_cmd) {
      int failures = 0;
      failures += print_report(oracle::diffusion_equivalence_suite(oracle_trials, oracle_seed));
      failures += print_report(oracle::auction_property_suite());
      failures += print_report(oracle::gradient_check_suite(100, oracle_seed));
      failures += print_report(oracle::monotonicity_suite(500, oracle_seed));
      std::cout << (failures == 0 ? "all oracle suites passed" : "oracle suites FAILED") << "\n";
      return failures == 0 ? kOk : kDataError;
    }
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

}  // namespace cbim::cli
