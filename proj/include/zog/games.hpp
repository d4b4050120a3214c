#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "zog/joint_params.hpp"
#include "zog/nets.hpp"
#include "zog/solvers.hpp"

namespace zog {

// Black-box vector utility: (joint params, game seed) -> one utility per player.
// Implementations are pure and safe to call concurrently.
class Game {
 public:
  virtual ~Game() = default;

  virtual std::string name() const = 0;
  virtual std::size_t num_players() const = 0;
  virtual std::vector<std::size_t> block_dims() const = 0;

  // Writes num_players() utilities into `out`.
  virtual void utility(const JointParams& x, std::uint64_t seed, std::span<double> out) const = 0;
  std::vector<double> utility(const JointParams& x, std::uint64_t seed) const;

  // Analytic simultaneous gradient; only calibration games provide one.
  virtual bool has_exact_gradient() const { return false; }
  virtual JointParams exact_gradient(const JointParams& x) const;

  // Fresh strategy parameters for one player.
  virtual ParamBlock initial_block(std::size_t player, std::uint64_t seed) const = 0;
  JointParams initial_params(std::uint64_t seed) const;

 protected:
  void check_layout(const JointParams& x) const;
};

using GamePtr = std::shared_ptr<const Game>;

// Games whose players are all represented by the same NetSpec.
class NetworkGame : public Game {
 public:
  NetworkGame(std::size_t n, NetSpec spec) : n_(n), spec_(spec) {}

  std::size_t num_players() const override { return n_; }
  std::vector<std::size_t> block_dims() const override;
  ParamBlock initial_block(std::size_t player, std::uint64_t seed) const override;

  const NetSpec& net_spec() const { return spec_; }

 protected:
  std::size_t n_;
  NetSpec spec_;
};

// ---------------------------------------------------------------------------
// Multi-item unit-demand auction, first-price payments.

struct UnitDemandInstance {
  std::size_t players = 0;
  std::size_t items = 0;
  std::vector<double> values;  // players x items, row-major
};

class UnitDemandAuction : public NetworkGame {
 public:
  UnitDemandAuction(std::size_t players, std::size_t items, std::size_t hidden = 64);

  std::string name() const override { return "unit_demand"; }
  using Game::utility;
  void utility(const JointParams& x, std::uint64_t seed, std::span<double> out) const override;

  std::size_t items() const { return items_; }

  UnitDemandInstance draw(std::uint64_t seed) const;

  // Allocation by maximum-sum assignment; winner pays own bid on its item.
  static std::vector<double> payoffs(const UnitDemandInstance& inst, const BidMatrix& bids);

 private:
  std::size_t items_;
};

// ---------------------------------------------------------------------------
// Knapsack auction. Player i observes [v_i, c_i, C] and bids one number.

struct KnapsackInstance {
  std::vector<double> values;
  std::vector<double> sizes;
  double capacity = 0.0;
};

class KnapsackAuction : public NetworkGame {
 public:
  explicit KnapsackAuction(std::size_t players, std::size_t hidden = 64);

  std::string name() const override { return "knapsack"; }
  using Game::utility;
  void utility(const JointParams& x, std::uint64_t seed, std::span<double> out) const override;

  KnapsackInstance draw(std::uint64_t seed) const;

  static std::vector<double> payoffs(const KnapsackInstance& inst, std::span<const double> bids);
};

// ---------------------------------------------------------------------------
// Sequential first-price auction of K identical items to N unit-demand bidders.
// Observation: [v_i, k/K, p_1, ..., p_{K-1}] with unannounced prices zero.

// (player, observation) -> bid
using BidPolicy = std::function<double(std::size_t, std::span<const double>)>;

struct SequentialOutcome {
  std::vector<double> utilities;
  std::vector<std::size_t> winners;  // one per round
  std::vector<double> prices;        // one per round
};

class SequentialAuction : public NetworkGame {
 public:
  SequentialAuction(std::size_t bidders, std::size_t rounds, std::size_t hidden = 64);

  std::string name() const override { return "sequential"; }
  using Game::utility;
  void utility(const JointParams& x, std::uint64_t seed, std::span<double> out) const override;

  std::size_t rounds() const { return rounds_; }
  std::vector<double> draw(std::uint64_t seed) const;

  static SequentialOutcome play(std::span<const double> values, std::size_t rounds,
                                const BidPolicy& policy);

 private:
  std::size_t rounds_;
};

// ---------------------------------------------------------------------------
// Continuous Goofspiel: all-pay bidding from a unit budget for shuffled prizes
// {1/R, ..., 1}. Observation: [budget, prize, k/R, noise]; the network output
// is the fraction of the remaining budget to bid.

struct GoofspielInstance {
  std::vector<double> prizes;  // R, in reveal order
  std::vector<double> noise;   // R x n latent inputs, row per round
};

struct GoofspielOutcome {
  std::vector<double> utilities;
  std::vector<double> budgets;
};

class Goofspiel : public NetworkGame {
 public:
  Goofspiel(std::size_t players, std::size_t rounds = 13, std::size_t hidden = 64);

  std::string name() const override { return "goofspiel"; }
  using Game::utility;
  void utility(const JointParams& x, std::uint64_t seed, std::span<double> out) const override;

  std::size_t rounds() const { return rounds_; }
  GoofspielInstance draw(std::uint64_t seed) const;

  // `policy` returns the bid fraction in [0,1].
  static GoofspielOutcome play(const GoofspielInstance& inst, std::size_t players,
                               const BidPolicy& policy);

 private:
  std::size_t rounds_;
};

// ---------------------------------------------------------------------------
// Single-item first-price auction with uniform values, used as a calibration
// game: the symmetric equilibrium bid is (n-1)/n * v.

class FirstPriceAuction : public NetworkGame {
 public:
  explicit FirstPriceAuction(std::size_t players, std::size_t hidden = 64);

  std::string name() const override { return "first_price"; }
  using Game::utility;
  void utility(const JointParams& x, std::uint64_t seed, std::span<double> out) const override;

  std::vector<double> draw(std::uint64_t seed) const;

  // Highest bid wins (lowest index on ties) and pays its bid.
  static std::vector<double> payoffs(std::span<const double> values,
                                     std::span<const double> bids);

  // Network parameters approximating the symmetric equilibrium bid function.
  ParamBlock equilibrium_block() const;
};

// ---------------------------------------------------------------------------
// Quadratic calibration game with closed-form simultaneous gradient:
//   u_i(x) = -|x_i - c_i|^2 + sum_{j != i} a_ij <x_i, x_j>

class QuadraticGame : public Game {
 public:
  // centers: n x dim (row-major); coupling: n x n (diagonal ignored).
  QuadraticGame(std::size_t players, std::size_t dim, std::vector<double> centers,
                std::vector<double> coupling);

  // Seeded coefficients: centers ~ U[-1,1], coupling ~ U[-scale, scale].
  static QuadraticGame random(std::size_t players, std::size_t dim, double coupling_scale,
                              std::uint64_t coeff_seed);

  std::string name() const override { return "quadratic"; }
  std::size_t num_players() const override { return n_; }
  std::vector<std::size_t> block_dims() const override;
  using Game::utility;
  void utility(const JointParams& x, std::uint64_t seed, std::span<double> out) const override;
  bool has_exact_gradient() const override { return true; }
  JointParams exact_gradient(const JointParams& x) const override;
  ParamBlock initial_block(std::size_t player, std::uint64_t seed) const override;

  std::size_t dim() const { return dim_; }
  std::span<const double> center(std::size_t i) const {
    return std::span<const double>(centers_).subspan(i * dim_, dim_);
  }
  JointParams centers() const;

 private:
  std::size_t n_;
  std::size_t dim_;
  std::vector<double> centers_;
  std::vector<double> coupling_;
};

// ---------------------------------------------------------------------------
// Game defined by callables; used for analytic test games such as the
// bilinear zero-sum game.

class FunctionGame : public Game {
 public:
  using UtilityFn = std::function<void(const JointParams&, std::uint64_t, std::span<double>)>;
  using GradientFn = std::function<JointParams(const JointParams&)>;

  FunctionGame(std::string name, std::vector<std::size_t> dims, UtilityFn utility,
               GradientFn exact = {});

  std::string name() const override { return name_; }
  std::size_t num_players() const override { return dims_.size(); }
  std::vector<std::size_t> block_dims() const override { return dims_; }
  using Game::utility;
  void utility(const JointParams& x, std::uint64_t seed, std::span<double> out) const override;
  bool has_exact_gradient() const override { return static_cast<bool>(exact_); }
  JointParams exact_gradient(const JointParams& x) const override;
  ParamBlock initial_block(std::size_t player, std::uint64_t seed) const override;

 private:
  std::string name_;
  std::vector<std::size_t> dims_;
  UtilityFn utility_;
  GradientFn exact_;
};

// u_1 = x_1 x_2, u_2 = -x_1 x_2 with exact gradient v = (x_2, -x_1).
std::shared_ptr<FunctionGame> bilinear_game();

}  // namespace zog
