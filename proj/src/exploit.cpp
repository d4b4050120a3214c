#include "zog/exploit.hpp"

#include <algorithm>

#include "zog/errors.hpp"
#include "zog/rng.hpp"

namespace zog {

BestResponse train_best_response(const Game& game, const JointParams& x, std::size_t player,
                                 const EsConfig& es, std::uint64_t seed) {
  if (player >= game.num_players() || x.num_blocks() != game.num_players()) {
    throw ShapeError("train_best_response: invalid player index or layout");
  }
  BestResponse br;
  if (es.warm_start) {
    const auto current = x.block(player);
    br.params.assign(current.begin(), current.end());
  } else {
    br.params = game.initial_block(player, derive_seed(seed, Stream::kInit, player));
  }
  if (br.params.size() != x.block_dim(player)) {
    throw ShapeError("train_best_response: initial block has the wrong size");
  }

  const std::size_t offset = x.offset(player);
  const ScalarFn payoff = [&](std::span<const double> y, std::uint64_t game_seed) {
    JointParams profile = x;
    std::copy(y.begin(), y.end(), profile.flat().begin() + static_cast<std::ptrdiff_t>(offset));
    std::vector<double> u(game.num_players());
    game.utility(profile, game_seed, u);
    return u[player];
  };

  BlockOptimizer optimizer(es.optimizer, br.params.size(), es.hyper);
  for (std::uint64_t it = 0; it < es.iterations; ++it) {
    const GradientEstimate est = pseudo_gradient_scalar(
        payoff, br.params, es.smoothing, derive_seed(seed, Stream::kBestResponse, it));
    br.utility_evals += est.utility_evals;
    const auto delta = optimizer.delta(est.g.flat());
    for (std::size_t d = 0; d < br.params.size(); ++d) br.params[d] += delta[d];
  }
  return br;
}

std::vector<double> mean_utility(const Game& game, const JointParams& x, std::size_t samples,
                                 std::uint64_t seed) {
  std::vector<double> sum(game.num_players(), 0.0), u(game.num_players());
  for (std::size_t s = 0; s < samples; ++s) {
    game.utility(x, derive_seed(seed, Stream::kEval, s), u);
    for (std::size_t i = 0; i < u.size(); ++i) sum[i] += u[i];
  }
  for (double& v : sum) v /= static_cast<double>(samples);
  return sum;
}

ExploitabilityReport estimate_exploitability(const Game& game, const JointParams& x,
                                             const EsConfig& es, std::size_t eval_samples,
                                             std::uint64_t seed) {
  if (eval_samples < 1) throw ConfigError("exploitability needs at least one eval sample");
  const std::size_t n = game.num_players();
  ExploitabilityReport report;
  report.samples = eval_samples;

  const std::uint64_t eval_seed = derive_seed(seed, Stream::kEval);
  report.current_utility = mean_utility(game, x, eval_samples, eval_seed);
  report.utility_evals += eval_samples;

  for (std::size_t i = 0; i < n; ++i) {
    const BestResponse br =
        train_best_response(game, x, i, es, derive_seed(seed, Stream::kBestResponse, i));
    report.utility_evals += br.utility_evals;
    JointParams deviated = x;
    std::copy(br.params.begin(), br.params.end(), deviated.block(i).begin());
    report.br_utility.push_back(mean_utility(game, deviated, eval_samples, eval_seed)[i]);
    report.utility_evals += eval_samples;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double r = report.br_utility[i] - report.current_utility[i];
    report.regret.push_back(r);
    report.regret_clamped.push_back(std::max(r, 0.0));
    report.phi_raw += r;
    report.phi_clamped += std::max(r, 0.0);
  }
  return report;
}

}  // namespace zog
