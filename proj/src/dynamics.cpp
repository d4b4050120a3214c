#include "zog/dynamics.hpp"

#include <chrono>
#include <cmath>

#include "zog/errors.hpp"
#include "zog/rng.hpp"

namespace zog {

void DynamicsConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("stepsize must be positive");
  if (iterations < 1) throw ConfigError("iterations must be at least 1");
  if (beta && !std::isfinite(*beta)) throw ConfigError("optimism must be finite");
}

TrainState TrainState::initial(JointParams x0, const DynamicsConfig& cfg) {
  TrainState state;
  for (std::size_t i = 0; i < x0.num_blocks(); ++i) {
    state.optimizers.emplace_back(cfg.optimizer, x0.block_dim(i), cfg.hyper());
  }
  state.x = std::move(x0);
  return state;
}

namespace {

void check_layout(const TrainState& state, const JointParams& g) {
  if (!state.x.same_layout(g)) throw ShapeError("gradient layout does not match parameters");
  if (state.optimizers.size() != state.x.num_blocks()) {
    throw ShapeError("optimizer count does not match parameter blocks");
  }
}

void add_delta(std::span<double> x, const std::vector<double>& delta) {
  for (std::size_t d = 0; d < x.size(); ++d) x[d] += delta[d];
}

void ascend(JointParams& x, std::vector<BlockOptimizer>& optimizers, const JointParams& g) {
  for (std::size_t i = 0; i < x.num_blocks(); ++i) {
    add_delta(x.block(i), optimizers[i].delta(g.block(i)));
  }
}

}  // namespace

TrainState sga_step(TrainState state, const GradientEstimate& estimate) {
  check_layout(state, estimate.g);
  ascend(state.x, state.optimizers, estimate.g);
  state.t += 1;
  return state;
}

TrainState oga_step(TrainState state, const GradientEstimate& estimate,
                    const DynamicsConfig& cfg) {
  check_layout(state, estimate.g);
  const JointParams& current = estimate.g;
  const JointParams& previous = state.prev_grad ? *state.prev_grad : current;
  const double ratio = cfg.optimism() / cfg.alpha;
  JointParams composite = current;
  auto c = composite.flat();
  const auto now = current.flat();
  const auto before = previous.flat();
  for (std::size_t d = 0; d < c.size(); ++d) c[d] = now[d] + ratio * (now[d] - before[d]);
  ascend(state.x, state.optimizers, composite);
  state.prev_grad = current;
  state.t += 1;
  return state;
}

EgStep eg_step(TrainState state, const GradientSource& source, std::uint64_t seed) {
  const GradientEstimate first = source(state.x, derive_seed(seed, Stream::kTrain, 0));
  check_layout(state, first.g);
  JointParams lookahead = state.x;
  std::vector<BlockOptimizer> throwaway = state.optimizers;
  ascend(lookahead, throwaway, first.g);

  const GradientEstimate second = source(lookahead, derive_seed(seed, Stream::kTrain, 1));
  check_layout(state, second.g);
  ascend(state.x, state.optimizers, second.g);
  state.t += 1;
  return EgStep{std::move(state), first.utility_evals + second.utility_evals};
}

GradientSource exact_gradient_source(const Game& game) {
  return [&game](const JointParams& x, std::uint64_t) {
    GradientEstimate est;
    est.g = game.exact_gradient(x);
    est.samples = 1;
    est.second_moment.assign(x.size(), 0.0);
    return est;
  };
}

GradientSource estimator_source(const Game& game, EstimatorKind kind, SmoothingConfig cfg) {
  return [&game, kind, cfg](const JointParams& x, std::uint64_t seed) {
    return estimate(kind, game, x, cfg, seed);
  };
}

TrainResult train(const GradientSource& source, JointParams x0, const DynamicsConfig& cfg,
                  std::uint64_t seed, const TrainObserver& observer) {
  cfg.validate();
  TrainResult result{TrainState::initial(std::move(x0), cfg), {}};
  result.history.reserve(cfg.iterations);
  double wall = 0.0;
  std::uint64_t evals = 0;
  using Clock = std::chrono::steady_clock;

  for (std::uint64_t t = 0; t < cfg.iterations; ++t) {
    const std::uint64_t step_seed = derive_seed(seed, Stream::kTrain, t);
    const auto start = Clock::now();
    if (cfg.method == Method::kEG) {
      EgStep step = eg_step(std::move(result.state), source, step_seed);
      result.state = std::move(step.state);
      evals += step.utility_evals;
    } else {
      const GradientEstimate est = source(result.state.x, step_seed);
      evals += est.utility_evals;
      result.state = cfg.method == Method::kOGA ? oga_step(std::move(result.state), est, cfg)
                                                : sga_step(std::move(result.state), est);
    }
    wall += std::chrono::duration<double>(Clock::now() - start).count();
    for (double v : result.state.x.flat()) {
      if (!std::isfinite(v)) throw NumericError("training diverged to non-finite parameters");
    }
    const IterationRecord rec{t + 1, wall, evals};
    result.history.push_back(rec);
    if (observer) observer(result.state, rec);
  }
  return result;
}

TrainResult train(const Game& game, const DynamicsConfig& cfg, const SmoothingConfig& smoothing,
                  EstimatorKind kind, std::uint64_t seed, const TrainObserver& observer) {
  smoothing.validate();
  return train(estimator_source(game, kind, smoothing), game.initial_params(seed), cfg, seed,
               observer);
}

}  // namespace zog
