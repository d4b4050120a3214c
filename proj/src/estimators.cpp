#include "zog/estimators.hpp"

#include <cmath>
#include <string>

#include "zog/errors.hpp"
#include "zog/parallel.hpp"
#include "zog/rng.hpp"

namespace zog {

void SmoothingConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive");
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
}

std::uint64_t jpspg_eval_count(Scheme scheme, std::size_t batch) {
  return scalar_eval_count(scheme, batch);
}

std::uint64_t spg_eval_count(Scheme scheme, std::size_t batch, std::size_t players) {
  switch (scheme) {
    case Scheme::kSP: return players * batch;
    case Scheme::kFD: return players * batch + 1;
    case Scheme::kCD: return 2 * players * batch;
  }
  return 0;
}

std::uint64_t scalar_eval_count(Scheme scheme, std::size_t batch) {
  switch (scheme) {
    case Scheme::kSP: return batch;
    case Scheme::kFD: return batch + 1;
    case Scheme::kCD: return 2 * batch;
  }
  return 0;
}

double GradientEstimate::standard_error(std::size_t k) const {
  if (samples < 2) return 0.0;
  const double mean = g.flat()[k];
  const double var = std::max(0.0, second_moment[k] - mean * mean);
  return std::sqrt(var / static_cast<double>(samples - 1));
}

std::vector<double> diag_of_outer(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("diag_of_outer: length mismatch");
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

namespace {

void require_finite(std::span<const double> u) {
  for (double v : u) {
    if (!std::isfinite(v)) throw NumericError("utility function returned a non-finite value");
  }
}

double difference_quotient(Scheme scheme, double plus, double minus, double base, double sigma) {
  switch (scheme) {
    case Scheme::kSP: return plus / sigma;
    case Scheme::kFD: return (plus - base) / sigma;
    case Scheme::kCD: return (plus - minus) / (2.0 * sigma);
  }
  return 0.0;
}

// Per-batch-element storage: perturbations (batch x D) and one scalar
// coefficient per (element, block). The estimate for block i of element k is
// coeff[k][i] * z_k restricted to block i.
struct SampleTable {
  std::size_t dim;
  std::size_t blocks;
  std::vector<double> z;
  std::vector<double> coeff;
  std::vector<std::uint64_t> evals;

  SampleTable(std::size_t batch, std::size_t d, std::size_t n)
      : dim(d), blocks(n), z(batch * d), coeff(batch * n), evals(batch, 0) {}

  std::span<double> z_row(std::size_t k) { return std::span<double>(z).subspan(k * dim, dim); }
  std::span<double> coeff_row(std::size_t k) {
    return std::span<double>(coeff).subspan(k * blocks, blocks);
  }
};

// Ordered (deterministic) reduction of a SampleTable into a GradientEstimate.
GradientEstimate reduce(const JointParams& layout, const SampleTable& table, std::size_t batch,
                        std::uint64_t extra_evals) {
  GradientEstimate est;
  est.g = JointParams(layout.dims());
  est.samples = batch;
  est.second_moment.assign(layout.size(), 0.0);
  auto sum = est.g.flat();
  for (std::size_t k = 0; k < batch; ++k) {
    const double* zk = table.z.data() + k * table.dim;
    for (std::size_t i = 0; i < table.blocks; ++i) {
      const double c = table.coeff[k * table.blocks + i];
      const std::size_t lo = layout.offset(i);
      const std::size_t hi = lo + layout.block_dim(i);
      for (std::size_t d = lo; d < hi; ++d) {
        const double s = c * zk[d];
        sum[d] += s;
        est.second_moment[d] += s * s;
      }
    }
    est.utility_evals += table.evals[k];
  }
  const double inv = 1.0 / static_cast<double>(batch);
  for (std::size_t d = 0; d < sum.size(); ++d) {
    sum[d] *= inv;
    est.second_moment[d] *= inv;
  }
  est.utility_evals += extra_evals;
  return est;
}

// Fills coeff (one per player) for a joint perturbation z. Returns evaluations used.
std::uint64_t jpspg_coefficients(const Game& game, const JointParams& x,
                                 std::span<const double> z, double sigma, Scheme scheme,
                                 std::uint64_t game_seed, std::span<const double> baseline,
                                 JointParams& scratch, std::span<double> u_plus,
                                 std::span<double> u_minus, std::span<double> coeff) {
  const auto xs = x.flat();
  auto s = scratch.flat();
  for (std::size_t d = 0; d < xs.size(); ++d) s[d] = xs[d] + sigma * z[d];
  game.utility(scratch, game_seed, u_plus);
  require_finite(u_plus);
  std::uint64_t evals = 1;
  if (scheme == Scheme::kCD) {
    for (std::size_t d = 0; d < xs.size(); ++d) s[d] = xs[d] - sigma * z[d];
    game.utility(scratch, game_seed, u_minus);
    require_finite(u_minus);
    ++evals;
  }
  for (std::size_t i = 0; i < coeff.size(); ++i) {
    const double base = scheme == Scheme::kFD ? baseline[i] : 0.0;
    const double minus = scheme == Scheme::kCD ? u_minus[i] : 0.0;
    coeff[i] = difference_quotient(scheme, u_plus[i], minus, base, sigma);
  }
  return evals;
}

// Same for the per-player estimator. `scratch` must equal x on entry and is
// restored on exit.
std::uint64_t spg_coefficients(const Game& game, const JointParams& x, std::span<const double> z,
                               double sigma, Scheme scheme, std::uint64_t game_seed,
                               std::span<const double> baseline, JointParams& scratch,
                               std::span<double> u_plus, std::span<double> u_minus,
                               std::span<double> coeff) {
  std::uint64_t evals = 0;
  const auto xs = x.flat();
  auto s = scratch.flat();
  for (std::size_t i = 0; i < coeff.size(); ++i) {
    const std::size_t lo = x.offset(i);
    const std::size_t hi = lo + x.block_dim(i);
    for (std::size_t d = lo; d < hi; ++d) s[d] = xs[d] + sigma * z[d];
    game.utility(scratch, game_seed, u_plus);
    require_finite(u_plus);
    ++evals;
    double minus = 0.0;
    if (scheme == Scheme::kCD) {
      for (std::size_t d = lo; d < hi; ++d) s[d] = xs[d] - sigma * z[d];
      game.utility(scratch, game_seed, u_minus);
      require_finite(u_minus);
      ++evals;
      minus = u_minus[i];
    }
    for (std::size_t d = lo; d < hi; ++d) s[d] = xs[d];
    const double base = scheme == Scheme::kFD ? baseline[i] : 0.0;
    coeff[i] = difference_quotient(scheme, u_plus[i], minus, base, sigma);
  }
  return evals;
}

void check_inputs(const Game& game, const JointParams& x, const SmoothingConfig& cfg) {
  cfg.validate();
  if (x.num_blocks() != game.num_players()) {
    throw ShapeError("estimator: player count does not match parameter blocks");
  }
}

std::vector<double> baseline_utility(const Game& game, const JointParams& x, Scheme scheme,
                                     std::uint64_t seed) {
  if (scheme != Scheme::kFD) return {};
  auto u = game.utility(x, derive_seed(seed, Stream::kGameBaseline));
  require_finite(u);
  return u;
}

enum class Mode { kJoint, kPerPlayer };

GradientEstimate run_batched(Mode mode, const Game& game, const JointParams& x,
                             const SmoothingConfig& cfg, std::uint64_t seed) {
  check_inputs(game, x, cfg);
  const std::size_t n = game.num_players();
  const std::size_t batch = cfg.batch_size;
  const std::vector<double> baseline = baseline_utility(game, x, cfg.scheme, seed);
  const std::uint64_t baseline_evals = baseline.empty() ? 0 : 1;

  SampleTable table(batch, x.size(), n);
  const std::size_t workers = std::max<std::size_t>(1, std::min(worker_count(), batch));
  std::vector<JointParams> scratch(workers, x);
  std::vector<std::vector<double>> plus(workers, std::vector<double>(n));
  std::vector<std::vector<double>> minus(workers, std::vector<double>(n));

  parallel_for(batch, [&](std::size_t k, std::size_t w) {
    auto zk = table.z_row(k);
    const std::uint64_t game_seed = derive_seed(seed, Stream::kGame, k);
    if (mode == Mode::kJoint) {
      Engine engine(derive_seed(seed, Stream::kPerturbation, k));
      fill_standard_normal(engine, zk);
      table.evals[k] = jpspg_coefficients(game, x, zk, cfg.sigma, cfg.scheme, game_seed, baseline,
                                          scratch[w], plus[w], minus[w], table.coeff_row(k));
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        Engine engine(derive_seed(seed, Stream::kPerturbation, k, i));
        fill_standard_normal(engine, zk.subspan(x.offset(i), x.block_dim(i)));
      }
      table.evals[k] = spg_coefficients(game, x, zk, cfg.sigma, cfg.scheme, game_seed, baseline,
                                        scratch[w], plus[w], minus[w], table.coeff_row(k));
    }
  });
  return reduce(x, table, batch, baseline_evals);
}

JointParams expand(const JointParams& x, std::span<const double> z,
                   std::span<const double> coeff) {
  JointParams g(x.dims());
  for (std::size_t i = 0; i < coeff.size(); ++i) {
    auto gi = g.block(i);
    for (std::size_t d = 0; d < gi.size(); ++d) gi[d] = coeff[i] * z[x.offset(i) + d];
  }
  return g;
}

}  // namespace

GradientEstimate pseudo_gradient_scalar(const ScalarFn& f, std::span<const double> x,
                                        const SmoothingConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const std::size_t batch = cfg.batch_size;
  const std::size_t dim = x.size();
  double base = 0.0;
  std::uint64_t extra = 0;
  if (cfg.scheme == Scheme::kFD) {
    base = f(x, derive_seed(seed, Stream::kGameBaseline));
    if (!std::isfinite(base)) throw NumericError("utility function returned a non-finite value");
    extra = 1;
  }

  SampleTable table(batch, dim, 1);
  const std::size_t workers = std::max<std::size_t>(1, std::min(worker_count(), batch));
  std::vector<std::vector<double>> scratch(workers, std::vector<double>(dim));

  parallel_for(batch, [&](std::size_t k, std::size_t w) {
    auto zk = table.z_row(k);
    Engine engine(derive_seed(seed, Stream::kPerturbation, k));
    fill_standard_normal(engine, zk);
    const std::uint64_t game_seed = derive_seed(seed, Stream::kGame, k);
    auto& s = scratch[w];
    for (std::size_t d = 0; d < dim; ++d) s[d] = x[d] + cfg.sigma * zk[d];
    const double plus = f(s, game_seed);
    double minus = 0.0;
    std::uint64_t evals = 1;
    if (cfg.scheme == Scheme::kCD) {
      for (std::size_t d = 0; d < dim; ++d) s[d] = x[d] - cfg.sigma * zk[d];
      minus = f(s, game_seed);
      ++evals;
    }
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
      throw NumericError("utility function returned a non-finite value");
    }
    table.coeff[k] = difference_quotient(cfg.scheme, plus, minus, base, cfg.sigma);
    table.evals[k] = evals;
  });
  return reduce(JointParams(std::vector<std::size_t>{dim}), table, batch, extra);
}

GradientEstimate spg_estimate(const Game& game, const JointParams& x, const SmoothingConfig& cfg,
                              std::uint64_t seed) {
  return run_batched(Mode::kPerPlayer, game, x, cfg, seed);
}

GradientEstimate jpspg_estimate(const Game& game, const JointParams& x,
                                const SmoothingConfig& cfg, std::uint64_t seed) {
  return run_batched(Mode::kJoint, game, x, cfg, seed);
}

namespace {

std::vector<double> sample_baseline(Scheme scheme,
                                    const std::optional<std::vector<double>>& baseline,
                                    std::size_t n) {
  if (scheme != Scheme::kFD) return std::vector<double>(n, 0.0);
  if (!baseline || baseline->size() != n) {
    throw ShapeError("forward-difference sample needs a baseline utility vector");
  }
  return *baseline;
}

}  // namespace

JointParams jpspg_sample(const Game& game, const JointParams& x, std::span<const double> z,
                         double sigma, Scheme scheme, std::uint64_t game_seed,
                         std::optional<std::vector<double>> baseline) {
  if (z.size() != x.size()) throw ShapeError("jpspg_sample: perturbation layout mismatch");
  const std::size_t n = game.num_players();
  const auto base = sample_baseline(scheme, baseline, n);
  JointParams scratch = x;
  std::vector<double> plus(n), minus(n), coeff(n);
  jpspg_coefficients(game, x, z, sigma, scheme, game_seed, base, scratch, plus, minus, coeff);
  return expand(x, z, coeff);
}

JointParams spg_sample(const Game& game, const JointParams& x, std::span<const double> z,
                       double sigma, Scheme scheme, std::uint64_t game_seed,
                       std::optional<std::vector<double>> baseline) {
  if (z.size() != x.size()) throw ShapeError("spg_sample: perturbation layout mismatch");
  const std::size_t n = game.num_players();
  const auto base = sample_baseline(scheme, baseline, n);
  JointParams scratch = x;
  std::vector<double> plus(n), minus(n), coeff(n);
  spg_coefficients(game, x, z, sigma, scheme, game_seed, base, scratch, plus, minus, coeff);
  return expand(x, z, coeff);
}

GradientEstimate estimate(EstimatorKind kind, const Game& game, const JointParams& x,
                          const SmoothingConfig& cfg, std::uint64_t seed) {
  return kind == EstimatorKind::kJPSPG ? jpspg_estimate(game, x, cfg, seed)
                                       : spg_estimate(game, x, cfg, seed);
}

}  // namespace zog
