#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "zog/estimators.hpp"
#include "zog/games.hpp"
#include "zog/joint_params.hpp"
#include "zog/optim.hpp"

namespace zog {

// Evolution-strategies best-response training settings.
struct EsConfig {
  std::uint64_t iterations = 1024;
  SmoothingConfig smoothing{0.1, Scheme::kCD, 256};
  OptimizerKind optimizer = OptimizerKind::kAdaBelief;
  AdaBeliefHyper hyper{};
  // Start from the player's current strategy instead of a fresh init.
  bool warm_start = false;
};

struct BestResponse {
  ParamBlock params;
  std::uint64_t utility_evals = 0;
};

// Holds the other players fixed and ascends player's own payoff with the
// scalar pseudo-gradient.
BestResponse train_best_response(const Game& game, const JointParams& x, std::size_t player,
                                 const EsConfig& es, std::uint64_t seed);

struct ExploitabilityReport {
  std::vector<double> br_utility;       // u_i(b_i, x_-i)
  std::vector<double> current_utility;  // u_i(x)
  std::vector<double> regret;           // raw, may be negative
  std::vector<double> regret_clamped;   // max(regret, 0)
  double phi_raw = 0.0;
  double phi_clamped = 0.0;
  std::size_t samples = 0;
  std::uint64_t utility_evals = 0;      // BR training plus Monte Carlo play
};

// Trains one best response per player, then estimates every utility with
// `eval_samples` plays. Current and deviating profiles share game seeds.
ExploitabilityReport estimate_exploitability(const Game& game, const JointParams& x,
                                             const EsConfig& es, std::size_t eval_samples,
                                             std::uint64_t seed);

// Mean utility vector over `samples` plays with seeds derived from `seed`.
std::vector<double> mean_utility(const Game& game, const JointParams& x, std::size_t samples,
                                 std::uint64_t seed);

}  // namespace zog
