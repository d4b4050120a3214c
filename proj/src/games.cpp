#include "zog/games.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "zog/errors.hpp"
#include "zog/rng.hpp"

namespace zog {

std::vector<double> Game::utility(const JointParams& x, std::uint64_t seed) const {
  std::vector<double> out(num_players());
  utility(x, seed, out);
  return out;
}

JointParams Game::exact_gradient(const JointParams&) const {
  throw ShapeError(name() + ": no exact gradient available");
}

JointParams Game::initial_params(std::uint64_t seed) const {
  const auto dims = block_dims();
  JointParams x(dims);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const ParamBlock b = initial_block(i, derive_seed(seed, Stream::kInit, i));
    std::copy(b.begin(), b.end(), x.block(i).begin());
  }
  return x;
}

void Game::check_layout(const JointParams& x) const {
  if (x.num_blocks() != num_players()) {
    throw ShapeError(name() + ": expected " + std::to_string(num_players()) +
                     " parameter blocks, got " + std::to_string(x.num_blocks()));
  }
  const auto dims = block_dims();
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (x.block_dim(i) != dims[i]) throw ShapeError(name() + ": parameter block size mismatch");
  }
}

std::vector<std::size_t> NetworkGame::block_dims() const {
  return std::vector<std::size_t>(n_, spec_.param_count());
}

ParamBlock NetworkGame::initial_block(std::size_t, std::uint64_t seed) const {
  return init_params(spec_, seed);
}

// ---------------------------------------------------------------------------

UnitDemandAuction::UnitDemandAuction(std::size_t players, std::size_t items, std::size_t hidden)
    : NetworkGame(players, NetSpec(items, hidden, items)), items_(items) {
  if (players == 0 || items == 0) throw ConfigError("unit_demand: need players >= 1, items >= 1");
}

UnitDemandInstance UnitDemandAuction::draw(std::uint64_t seed) const {
  Engine engine(seed);
  UnitDemandInstance inst{n_, items_, std::vector<double>(n_ * items_)};
  for (double& v : inst.values) v = uniform01(engine);
  return inst;
}

std::vector<double> UnitDemandAuction::payoffs(const UnitDemandInstance& inst,
                                               const BidMatrix& bids) {
  if (bids.rows != inst.players || bids.cols != inst.items) {
    throw ShapeError("unit_demand: bid matrix shape mismatch");
  }
  const Assignment alloc = solve_assignment(bids);
  std::vector<double> out(inst.players, 0.0);
  for (std::size_t i = 0; i < inst.players; ++i) {
    const int j = alloc.row_to_col[i];
    if (j < 0) continue;
    const auto col = static_cast<std::size_t>(j);
    out[i] = inst.values[i * inst.items + col] - bids.at(i, col);
  }
  return out;
}

void UnitDemandAuction::utility(const JointParams& x, std::uint64_t seed,
                                std::span<double> out) const {
  check_layout(x);
  const UnitDemandInstance inst = draw(seed);
  BidMatrix bids(n_, items_, std::vector<double>(n_ * items_));
  for (std::size_t i = 0; i < n_; ++i) {
    forward(spec_, x.block(i), std::span<const double>(inst.values).subspan(i * items_, items_),
            std::span<double>(bids.values).subspan(i * items_, items_));
  }
  const auto u = payoffs(inst, bids);
  std::copy(u.begin(), u.end(), out.begin());
}

// ---------------------------------------------------------------------------

KnapsackAuction::KnapsackAuction(std::size_t players, std::size_t hidden)
    : NetworkGame(players, NetSpec(3, hidden, 1)) {
  if (players == 0) throw ConfigError("knapsack: need players >= 1");
}

KnapsackInstance KnapsackAuction::draw(std::uint64_t seed) const {
  Engine engine(seed);
  KnapsackInstance inst;
  inst.values.resize(n_);
  inst.sizes.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    inst.values[i] = uniform01(engine);
    inst.sizes[i] = uniform01(engine);
  }
  inst.capacity = static_cast<double>(n_) * uniform01(engine);
  return inst;
}

std::vector<double> KnapsackAuction::payoffs(const KnapsackInstance& inst,
                                             std::span<const double> bids) {
  const KnapsackSolution sel = solve_knapsack(bids, inst.sizes, inst.capacity);
  std::vector<double> out(bids.size(), 0.0);
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (sel.selected[i]) out[i] = inst.values[i] - bids[i];
  }
  return out;
}

void KnapsackAuction::utility(const JointParams& x, std::uint64_t seed,
                              std::span<double> out) const {
  check_layout(x);
  const KnapsackInstance inst = draw(seed);
  std::vector<double> bids(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::array<double, 3> obs{inst.values[i], inst.sizes[i], inst.capacity};
    bids[i] = forward_scalar(spec_, x.block(i), obs);
  }
  const auto u = payoffs(inst, bids);
  std::copy(u.begin(), u.end(), out.begin());
}

// ---------------------------------------------------------------------------

SequentialAuction::SequentialAuction(std::size_t bidders, std::size_t rounds, std::size_t hidden)
    : NetworkGame(bidders, NetSpec(rounds + 1, hidden, 1)), rounds_(rounds) {
  if (rounds == 0 || bidders <= rounds) throw ConfigError("sequential: need N > K >= 1");
}

std::vector<double> SequentialAuction::draw(std::uint64_t seed) const {
  Engine engine(seed);
  std::vector<double> values(n_);
  for (double& v : values) v = uniform01(engine);
  return values;
}

SequentialOutcome SequentialAuction::play(std::span<const double> values, std::size_t rounds,
                                          const BidPolicy& policy) {
  const std::size_t n = values.size();
  if (rounds == 0 || n <= rounds) throw ConfigError("sequential: need N > K >= 1");
  SequentialOutcome result{std::vector<double>(n, 0.0), {}, {}};
  std::vector<bool> active(n, true);
  // [v_i, k/K, p_1..p_{K-1}]
  std::vector<double> obs(rounds + 1, 0.0);
  for (std::size_t k = 1; k <= rounds; ++k) {
    std::size_t winner = n;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      obs[0] = values[i];
      obs[1] = static_cast<double>(k) / static_cast<double>(rounds);
      const double bid = policy(i, obs);
      if (winner == n || bid > best) {
        winner = i;
        best = bid;
      }
    }
    active[winner] = false;
    result.utilities[winner] = values[winner] - best;
    result.winners.push_back(winner);
    result.prices.push_back(best);
    if (k < rounds) obs[1 + k] = best;
  }
  return result;
}

void SequentialAuction::utility(const JointParams& x, std::uint64_t seed,
                                std::span<double> out) const {
  check_layout(x);
  const auto values = draw(seed);
  const auto outcome = play(values, rounds_, [&](std::size_t i, std::span<const double> obs) {
    return forward_scalar(spec_, x.block(i), obs);
  });
  std::copy(outcome.utilities.begin(), outcome.utilities.end(), out.begin());
}

// ---------------------------------------------------------------------------

Goofspiel::Goofspiel(std::size_t players, std::size_t rounds, std::size_t hidden)
    : NetworkGame(players, NetSpec(4, hidden, 1)), rounds_(rounds) {
  if (players < 2 || rounds == 0) throw ConfigError("goofspiel: need n >= 2, R >= 1");
}

GoofspielInstance Goofspiel::draw(std::uint64_t seed) const {
  Engine engine(seed);
  GoofspielInstance inst;
  inst.prizes.resize(rounds_);
  for (std::size_t k = 0; k < rounds_; ++k) {
    inst.prizes[k] = static_cast<double>(k + 1) / static_cast<double>(rounds_);
  }
  std::shuffle(inst.prizes.begin(), inst.prizes.end(), engine);
  inst.noise.resize(rounds_ * n_);
  fill_standard_normal(engine, inst.noise);
  return inst;
}

GoofspielOutcome Goofspiel::play(const GoofspielInstance& inst, std::size_t players,
                                 const BidPolicy& policy) {
  const std::size_t rounds = inst.prizes.size();
  if (inst.noise.size() != rounds * players) throw ShapeError("goofspiel: noise shape mismatch");
  GoofspielOutcome result{std::vector<double>(players, 0.0), std::vector<double>(players, 1.0)};
  std::vector<double> bids(players);
  std::array<double, 4> obs{};
  for (std::size_t k = 0; k < rounds; ++k) {
    const double prize = inst.prizes[k];
    for (std::size_t i = 0; i < players; ++i) {
      obs = {result.budgets[i], prize,
             static_cast<double>(k + 1) / static_cast<double>(rounds), inst.noise[k * players + i]};
      const double fraction = std::clamp(policy(i, obs), 0.0, 1.0);
      bids[i] = fraction * result.budgets[i];
    }
    const double top = *std::max_element(bids.begin(), bids.end());
    const auto tied = static_cast<double>(std::count(bids.begin(), bids.end(), top));
    for (std::size_t i = 0; i < players; ++i) {
      if (bids[i] == top) result.utilities[i] += prize / tied;
      result.budgets[i] = std::max(0.0, result.budgets[i] - bids[i]);
    }
  }
  return result;
}

void Goofspiel::utility(const JointParams& x, std::uint64_t seed, std::span<double> out) const {
  check_layout(x);
  const GoofspielInstance inst = draw(seed);
  const auto outcome = play(inst, n_, [&](std::size_t i, std::span<const double> obs) {
    return forward_scalar(spec_, x.block(i), obs);
  });
  std::copy(outcome.utilities.begin(), outcome.utilities.end(), out.begin());
}

// ---------------------------------------------------------------------------

FirstPriceAuction::FirstPriceAuction(std::size_t players, std::size_t hidden)
    : NetworkGame(players, NetSpec(1, hidden, 1)) {
  if (players < 2) throw ConfigError("first_price: need n >= 2");
}

std::vector<double> FirstPriceAuction::draw(std::uint64_t seed) const {
  Engine engine(seed);
  std::vector<double> values(n_);
  for (double& v : values) v = uniform01(engine);
  return values;
}

std::vector<double> FirstPriceAuction::payoffs(std::span<const double> values,
                                               std::span<const double> bids) {
  if (values.size() != bids.size() || bids.empty()) {
    throw ShapeError("first_price: values/bids mismatch");
  }
  std::size_t winner = 0;
  for (std::size_t i = 1; i < bids.size(); ++i) {
    if (bids[i] > bids[winner]) winner = i;
  }
  std::vector<double> out(bids.size(), 0.0);
  out[winner] = values[winner] - bids[winner];
  return out;
}

void FirstPriceAuction::utility(const JointParams& x, std::uint64_t seed,
                                std::span<double> out) const {
  check_layout(x);
  const auto values = draw(seed);
  std::vector<double> bids(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    bids[i] = forward_scalar(spec_, x.block(i), std::span<const double>(&values[i], 1));
  }
  const auto u = payoffs(values, bids);
  std::copy(u.begin(), u.end(), out.begin());
}

ParamBlock FirstPriceAuction::equilibrium_block() const {
  const double shade = static_cast<double>(n_ - 1) / static_cast<double>(n_);
  const std::size_t segments = spec_.hidden_dim();
  constexpr double kLow = 0.01;
  std::vector<double> knots(segments + 1), pre(segments + 1);
  for (std::size_t k = 0; k <= segments; ++k) {
    knots[k] = kLow + (1.0 - kLow) * static_cast<double>(k) / static_cast<double>(segments);
    pre[k] = logit(shade * knots[k]);
  }
  return piecewise_linear_params(spec_, knots, pre);
}

// ---------------------------------------------------------------------------

QuadraticGame::QuadraticGame(std::size_t players, std::size_t dim, std::vector<double> centers,
                             std::vector<double> coupling)
    : n_(players), dim_(dim), centers_(std::move(centers)), coupling_(std::move(coupling)) {
  if (players < 1 || dim < 1) throw ConfigError("quadratic: need players >= 1, dim >= 1");
  if (centers_.size() != n_ * dim_ || coupling_.size() != n_ * n_) {
    throw ShapeError("quadratic: coefficient shapes do not match player count");
  }
}

QuadraticGame QuadraticGame::random(std::size_t players, std::size_t dim, double coupling_scale,
                                    std::uint64_t coeff_seed) {
  Engine engine(coeff_seed);
  std::vector<double> centers(players * dim), coupling(players * players, 0.0);
  for (double& c : centers) c = 2.0 * uniform01(engine) - 1.0;
  for (std::size_t i = 0; i < players; ++i) {
    for (std::size_t j = 0; j < players; ++j) {
      const double a = coupling_scale * (2.0 * uniform01(engine) - 1.0);
      if (i != j) coupling[i * players + j] = a;
    }
  }
  return QuadraticGame(players, dim, std::move(centers), std::move(coupling));
}

std::vector<std::size_t> QuadraticGame::block_dims() const {
  return std::vector<std::size_t>(n_, dim_);
}

void QuadraticGame::utility(const JointParams& x, std::uint64_t, std::span<double> out) const {
  check_layout(x);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto xi = x.block(i);
    const auto ci = center(i);
    double u = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) u -= (xi[k] - ci[k]) * (xi[k] - ci[k]);
    for (std::size_t j = 0; j < n_; ++j) {
      if (j == i) continue;
      const auto xj = x.block(j);
      double dot = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) dot += xi[k] * xj[k];
      u += coupling_[i * n_ + j] * dot;
    }
    out[i] = u;
  }
}

JointParams QuadraticGame::exact_gradient(const JointParams& x) const {
  check_layout(x);
  JointParams v(block_dims());
  for (std::size_t i = 0; i < n_; ++i) {
    auto vi = v.block(i);
    const auto xi = x.block(i);
    const auto ci = center(i);
    for (std::size_t k = 0; k < dim_; ++k) vi[k] = -2.0 * (xi[k] - ci[k]);
    for (std::size_t j = 0; j < n_; ++j) {
      if (j == i) continue;
      const auto xj = x.block(j);
      for (std::size_t k = 0; k < dim_; ++k) vi[k] += coupling_[i * n_ + j] * xj[k];
    }
  }
  return v;
}

ParamBlock QuadraticGame::initial_block(std::size_t, std::uint64_t seed) const {
  Engine engine(seed);
  ParamBlock b(dim_);
  fill_standard_normal(engine, b);
  return b;
}

JointParams QuadraticGame::centers() const {
  JointParams x(block_dims());
  std::copy(centers_.begin(), centers_.end(), x.flat().begin());
  return x;
}

// ---------------------------------------------------------------------------

FunctionGame::FunctionGame(std::string name, std::vector<std::size_t> dims, UtilityFn utility,
                           GradientFn exact)
    : name_(std::move(name)),
      dims_(std::move(dims)),
      utility_(std::move(utility)),
      exact_(std::move(exact)) {}

void FunctionGame::utility(const JointParams& x, std::uint64_t seed,
                           std::span<double> out) const {
  check_layout(x);
  utility_(x, seed, out);
}

JointParams FunctionGame::exact_gradient(const JointParams& x) const {
  if (!exact_) return Game::exact_gradient(x);
  check_layout(x);
  return exact_(x);
}

ParamBlock FunctionGame::initial_block(std::size_t player, std::uint64_t) const {
  return ParamBlock(dims_.at(player), 0.0);
}

std::shared_ptr<FunctionGame> bilinear_game() {
  return std::make_shared<FunctionGame>(
      "bilinear", std::vector<std::size_t>{1, 1},
      [](const JointParams& x, std::uint64_t, std::span<double> out) {
        const double p = x.flat()[0] * x.flat()[1];
        out[0] = p;
        out[1] = -p;
      },
      [](const JointParams& x) {
        JointParams v(x.dims());
        v.flat()[0] = x.flat()[1];
        v.flat()[1] = -x.flat()[0];
        return v;
      });
}

}  // namespace zog
