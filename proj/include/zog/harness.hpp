#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zog/dynamics.hpp"
#include "zog/estimators.hpp"
#include "zog/exploit.hpp"
#include "zog/games.hpp"

namespace zog {

struct ExperimentConfig {
  std::string game = "unit_demand";
  std::size_t players = 10;
  std::size_t items = 10;
  std::size_t rounds = 0;  // 0: game default (goofspiel 13, sequential players/2)
  std::size_t hidden = 64;
  EstimatorKind estimator = EstimatorKind::kJPSPG;
  Scheme scheme = Scheme::kCD;
  Method dynamics = Method::kSGA;
  OptimizerKind optimizer = OptimizerKind::kAdaBelief;
  double lr = 1e-4;
  std::optional<double> beta;  // OGA optimism, defaults to lr
  double sigma = 0.1;
  std::size_t batch = 256;
  std::uint64_t iters = 1000;
  std::size_t trials = 8;
  std::uint64_t eval_every = 100;
  std::uint64_t br_iters = 1024;
  double br_lr = 1e-2;
  std::size_t eval_samples = 1024;
  std::uint64_t seed = 0;
  bool eval_initial = false;  // also evaluate the untrained profile (iteration 0)
  std::string out = "out";

  void validate() const;
};

// Applies one `key = value` setting; keys match the CLI long-option names.
// Throws ConfigError for unknown keys or malformed values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Flat key-value text: one `key = value` (or `key value`) per line, `#` comments.
std::map<std::string, std::string> parse_key_values(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

// Serializes every field as key = value lines accepted by apply_setting.
std::string to_key_values(const ExperimentConfig& cfg);

std::string to_string(EstimatorKind kind);
std::string to_string(Scheme scheme);
std::string to_string(Method method);
std::string to_string(OptimizerKind kind);

DynamicsConfig dynamics_config(const ExperimentConfig& cfg);
SmoothingConfig smoothing_config(const ExperimentConfig& cfg);
EsConfig es_config(const ExperimentConfig& cfg);

GamePtr make_game(const ExperimentConfig& cfg);

struct MetricsRow {
  std::size_t trial = 0;
  std::uint64_t iteration = 0;
  double wall_time_s = 0.0;
  std::uint64_t utility_evals = 0;
  double exploitability_raw = 0.0;
  double exploitability_clamped = 0.0;

  bool operator==(const MetricsRow&) const = default;
};

inline constexpr const char* kCsvHeader =
    "trial,iteration,wall_time_s,utility_evals,exploitability_raw,exploitability_clamped";

// Shortest round-trip decimal (fixed notation) for a double.
std::string format_real(double v);

void write_csv(const std::vector<MetricsRow>& rows, const std::filesystem::path& path);
std::string csv_text(const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_csv(const std::filesystem::path& path);
std::vector<MetricsRow> parse_csv(const std::string& text, const std::string& source = "<csv>");

// Cost of one exploitability evaluation, kept apart from training counters.
struct EvalCost {
  std::size_t trial = 0;
  std::uint64_t iteration = 0;
  std::uint64_t utility_evals = 0;
  double wall_time_s = 0.0;
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;
  std::vector<EvalCost> eval_costs;
  std::vector<JointParams> final_params;  // one per trial
  std::vector<JointParams> initial_params;
};

// Per-trial seeds, exposed so callers can reproduce a trial's start point.
std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t trial);

// Runs all trials. Writes metrics.csv, eval_costs.csv, config.txt and one
// trial_<k>.json snapshot per trial into cfg.out unless it is empty.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace zog
