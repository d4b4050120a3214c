#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "zog/estimators.hpp"
#include "zog/games.hpp"
#include "zog/joint_params.hpp"
#include "zog/optim.hpp"

namespace zog {

enum class Method { kSGA, kOGA, kEG };

struct DynamicsConfig {
  Method method = Method::kSGA;
  double alpha = 1e-4;         // stepsize, also the optimizer learning rate
  std::optional<double> beta;  // OGA optimism; defaults to alpha
  std::uint64_t iterations = 1;
  OptimizerKind optimizer = OptimizerKind::kAdaBelief;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-16;

  double optimism() const { return beta.value_or(alpha); }
  AdaBeliefHyper hyper() const { return {alpha, beta1, beta2, eps}; }
  void validate() const;
};

struct TrainState {
  JointParams x;
  std::optional<JointParams> prev_grad;  // OGA only, present once t >= 1
  std::vector<BlockOptimizer> optimizers;
  std::uint64_t t = 0;

  static TrainState initial(JointParams x0, const DynamicsConfig& cfg);
};

// x <- x + optimizer_delta(g)
TrainState sga_step(TrainState state, const GradientEstimate& estimate);

// Composite gradient g_t + (beta/alpha)(g_t - g_{t-1}) with g_{-1} = g_0.
TrainState oga_step(TrainState state, const GradientEstimate& estimate,
                    const DynamicsConfig& cfg);

// Gradient oracle queried at arbitrary points.
using GradientSource = std::function<GradientEstimate(const JointParams&, std::uint64_t)>;

struct EgStep {
  TrainState state;
  std::uint64_t utility_evals = 0;
};

// Extrapolate with g(x), then step from x with g(x~). With AdaBelief the
// extrapolation uses a throwaway copy of the optimizer state.
EgStep eg_step(TrainState state, const GradientSource& source, std::uint64_t seed);

GradientSource exact_gradient_source(const Game& game);
GradientSource estimator_source(const Game& game, EstimatorKind kind, SmoothingConfig cfg);

struct IterationRecord {
  std::uint64_t iteration = 0;  // 1-based count of completed iterations
  double wall_time_s = 0.0;     // cumulative training time
  std::uint64_t utility_evals = 0;  // cumulative
};

using TrainObserver = std::function<void(const TrainState&, const IterationRecord&)>;

struct TrainResult {
  TrainState state;
  std::vector<IterationRecord> history;
};

// Runs cfg.iterations steps of the configured method from x0. The observer is
// called after every iteration and is excluded from the timing.
TrainResult train(const GradientSource& source, JointParams x0, const DynamicsConfig& cfg,
                  std::uint64_t seed, const TrainObserver& observer = {});

// Starts from game.initial_params(seed) and uses the chosen estimator.
TrainResult train(const Game& game, const DynamicsConfig& cfg, const SmoothingConfig& smoothing,
                  EstimatorKind kind, std::uint64_t seed, const TrainObserver& observer = {});

}  // namespace zog
