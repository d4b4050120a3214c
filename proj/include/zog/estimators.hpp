#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "zog/games.hpp"
#include "zog/joint_params.hpp"

namespace zog {

// Single-point, forward-difference and centered-difference (antithetic) forms.
enum class Scheme { kSP, kFD, kCD };

struct SmoothingConfig {
  double sigma = 0.1;
  Scheme scheme = Scheme::kCD;
  std::size_t batch_size = 256;

  void validate() const;
};

// Utility evaluations one estimate consumes, per scheme and player count.
std::uint64_t jpspg_eval_count(Scheme scheme, std::size_t batch);
std::uint64_t spg_eval_count(Scheme scheme, std::size_t batch, std::size_t players);
std::uint64_t scalar_eval_count(Scheme scheme, std::size_t batch);

struct GradientEstimate {
  JointParams g;
  std::uint64_t utility_evals = 0;
  std::size_t samples = 0;
  // Per-coordinate mean of squared per-sample estimates.
  std::vector<double> second_moment;

  // Standard error of g at flat coordinate k.
  double standard_error(std::size_t k) const;
};

// Elementwise product, i.e. the diagonal of the outer product a (x) b.
std::vector<double> diag_of_outer(std::span<const double> a, std::span<const double> b);

// Scalar black box evaluated at a point under a given game seed.
using ScalarFn = std::function<double(std::span<const double>, std::uint64_t)>;

// Batch-mean Gaussian-smoothing gradient of a scalar function. The result has
// a single block of x.size(). CD pairs share a game seed.
GradientEstimate pseudo_gradient_scalar(const ScalarFn& f, std::span<const double> x,
                                        const SmoothingConfig& cfg, std::uint64_t seed);

// Classical per-player estimator: player i's block is perturbed alone and
// component i of the utility vector is read. All players within one batch
// element share the game seed.
GradientEstimate spg_estimate(const Game& game, const JointParams& x, const SmoothingConfig& cfg,
                              std::uint64_t seed);

// Joint-perturbation estimator: one perturbation of every block per batch
// element, g_i = (1/sigma) u(x + sigma z)_i z_i (and FD/CD analogues).
GradientEstimate jpspg_estimate(const Game& game, const JointParams& x,
                                const SmoothingConfig& cfg, std::uint64_t seed);

// Single-sample forms with an explicit perturbation z laid out like x.
// `baseline` is u(x) and is required for FD.
JointParams jpspg_sample(const Game& game, const JointParams& x, std::span<const double> z,
                         double sigma, Scheme scheme, std::uint64_t game_seed,
                         std::optional<std::vector<double>> baseline = std::nullopt);
JointParams spg_sample(const Game& game, const JointParams& x, std::span<const double> z,
                       double sigma, Scheme scheme, std::uint64_t game_seed,
                       std::optional<std::vector<double>> baseline = std::nullopt);

enum class EstimatorKind { kSPG, kJPSPG };

GradientEstimate estimate(EstimatorKind kind, const Game& game, const JointParams& x,
                          const SmoothingConfig& cfg, std::uint64_t seed);

}  // namespace zog
