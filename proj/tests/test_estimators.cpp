#include <gtest/gtest.h>

#include <cmath>
#include <mutex>
#include <random>

#include "zog/errors.hpp"
#include "zog/estimators.hpp"
#include "zog/games.hpp"

using namespace zog;

namespace {

// u_i(x) = x_i for 1-D players.
std::shared_ptr<FunctionGame> own_param_game(std::size_t n) {
  return std::make_shared<FunctionGame>(
      "own", std::vector<std::size_t>(n, 1),
      [](const JointParams& x, std::uint64_t, std::span<double> out) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.flat()[i];
      });
}

std::shared_ptr<FunctionGame> constant_game(std::size_t n, double c) {
  return std::make_shared<FunctionGame>(
      "constant", std::vector<std::size_t>(n, 2),
      [c](const JointParams&, std::uint64_t, std::span<double> out) {
        for (double& v : out) v = c;
      });
}

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(DiagOfOuter, Examples) {
  EXPECT_EQ(diag_of_outer(std::vector<double>{1, 2}, std::vector<double>{3, 4}),
            (std::vector<double>{3, 8}));
  EXPECT_EQ(diag_of_outer(std::vector<double>{0, 0, 0}, std::vector<double>{3, 4, 5}),
            (std::vector<double>{0, 0, 0}));
}

TEST(DiagOfOuter, MatchesMaterializedDiagonal) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> a(64), b(64);
    for (double& v : a) v = nd(rng);
    for (double& v : b) v = nd(rng);
    std::vector<double> outer(64 * 64);
    for (std::size_t i = 0; i < 64; ++i)
      for (std::size_t j = 0; j < 64; ++j) outer[i * 64 + j] = a[i] * b[j];
    const auto d = diag_of_outer(a, b);
    for (std::size_t i = 0; i < 64; ++i) EXPECT_EQ(d[i], outer[i * 64 + i]);
  }
  EXPECT_THROW(diag_of_outer(std::vector<double>{1}, std::vector<double>{1, 2}), ShapeError);
}

TEST(ScalarPseudoGradient, ConstantFunctionIsZero) {
  const ScalarFn f = [](std::span<const double>, std::uint64_t) { return 5.0; };
  const std::vector<double> x{0.3, -1.0};
  for (Scheme s : {Scheme::kFD, Scheme::kCD}) {
    const auto est = pseudo_gradient_scalar(f, x, {0.1, s, 17}, 3);
    for (double g : est.g.flat()) EXPECT_EQ(g, 0.0);
  }
}

TEST(ScalarPseudoGradient, LinearSingleSample) {
  // Recover the drawn z from the +sigma evaluation point.
  std::vector<double> points;
  const ScalarFn f = [&](std::span<const double> y, std::uint64_t) {
    points.push_back(y[0]);
    return 2.0 * y[0];
  };
  const std::vector<double> x{0.7};
  const auto est = pseudo_gradient_scalar(f, x, {0.1, Scheme::kCD, 1}, 9);
  ASSERT_EQ(points.size(), 2u);
  const double z = (points[0] - 0.7) / 0.1;
  EXPECT_NEAR(est.g.flat()[0], 2.0 * z * z, 1e-12);
  EXPECT_EQ(est.utility_evals, 2u);
}

TEST(ScalarPseudoGradient, LinearUnitPerturbationHandValue) {
  // (f(x + 0.1) - f(x - 0.1)) / 0.2 * 1 for f = 2x.
  EXPECT_NEAR((2.0 * 1.1 - 2.0 * 0.9) / (2 * 0.1) * 1.0, 2.0, 1e-12);
}

TEST(ScalarPseudoGradient, QuadraticUnbiased) {
  const ScalarFn f = [](std::span<const double> y, std::uint64_t) { return y[0] * y[0]; };
  const std::vector<double> x{1.0};
  const auto est = pseudo_gradient_scalar(f, x, {0.1, Scheme::kCD, 100000}, 21);
  EXPECT_LE(std::abs(est.g.flat()[0] - 2.0), 3.0 * est.standard_error(0));
}

TEST(ScalarPseudoGradient, EvalCounts) {
  const ScalarFn f = [](std::span<const double> y, std::uint64_t) { return y[0]; };
  const std::vector<double> x{0.0};
  EXPECT_EQ(pseudo_gradient_scalar(f, x, {0.1, Scheme::kSP, 8}, 1).utility_evals, 8u);
  EXPECT_EQ(pseudo_gradient_scalar(f, x, {0.1, Scheme::kFD, 8}, 1).utility_evals, 9u);
  EXPECT_EQ(pseudo_gradient_scalar(f, x, {0.1, Scheme::kCD, 8}, 1).utility_evals, 16u);
}

TEST(ScalarPseudoGradient, RejectsNonFinite) {
  const ScalarFn f = [](std::span<const double>, std::uint64_t) { return std::nan(""); };
  const std::vector<double> x{0.0};
  EXPECT_THROW(pseudo_gradient_scalar(f, x, {0.1, Scheme::kCD, 4}, 1), NumericError);
  EXPECT_THROW(pseudo_gradient_scalar(f, x, {0.0, Scheme::kCD, 4}, 1), ConfigError);
  EXPECT_THROW(pseudo_gradient_scalar(f, x, {0.1, Scheme::kCD, 0}, 1), ConfigError);
}

TEST(Samples, LinearGameHandValues) {
  const auto game = own_param_game(2);
  const auto x = JointParams::from_blocks({{0.3}, {-0.4}});
  const std::vector<double> z{0.5, -2.0};
  for (auto sample : {&spg_sample, &jpspg_sample}) {
    const auto g = sample(*game, x, z, 0.1, Scheme::kCD, 0, std::nullopt);
    EXPECT_NEAR(g.flat()[0], 0.25, 1e-12);
    EXPECT_NEAR(g.flat()[1], 4.0, 1e-12);
  }
}

TEST(Samples, CdAntitheticSymmetry) {
  const auto game = std::make_shared<QuadraticGame>(QuadraticGame::random(3, 2, 0.5, 4));
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 50; ++t) {
    JointParams x(game->block_dims());
    for (double& v : x.flat()) v = nd(rng);
    std::vector<double> z(x.size()), mz(x.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
      z[k] = nd(rng);
      mz[k] = -z[k];
    }
    for (auto sample : {&spg_sample, &jpspg_sample}) {
      const auto a = sample(*game, x, z, 0.1, Scheme::kCD, 5, std::nullopt);
      const auto b = sample(*game, x, mz, 0.1, Scheme::kCD, 5, std::nullopt);
      for (std::size_t k = 0; k < z.size(); ++k) EXPECT_NEAR(a.flat()[k], b.flat()[k], 1e-12);
    }
  }
}

TEST(Samples, FdNeedsBaseline) {
  const auto game = own_param_game(2);
  const auto x = JointParams::from_blocks({{0.3}, {-0.4}});
  const std::vector<double> z{0.5, -2.0};
  EXPECT_THROW(jpspg_sample(*game, x, z, 0.1, Scheme::kFD, 0, std::nullopt), ShapeError);
  const auto g = jpspg_sample(*game, x, z, 0.1, Scheme::kFD, 0, std::vector<double>{0.3, -0.4});
  EXPECT_NEAR(g.flat()[0], 0.25, 1e-12);
  EXPECT_NEAR(g.flat()[1], 4.0, 1e-12);
}

TEST(Estimators, ConstantUtilityZeroUnderFdCd) {
  const auto game = constant_game(3, 2.5);
  const JointParams x(game->block_dims());
  for (Scheme s : {Scheme::kFD, Scheme::kCD}) {
    for (auto kind : {EstimatorKind::kSPG, EstimatorKind::kJPSPG}) {
      const auto est = estimate(kind, *game, x, {0.1, s, 32}, 1);
      for (double g : est.g.flat()) EXPECT_EQ(g, 0.0);
    }
  }
}

TEST(Estimators, EvalCountsExact) {
  for (std::size_t n : {2u, 3u, 5u, 10u}) {
    const auto game = own_param_game(n);
    const JointParams x(game->block_dims());
    for (Scheme s : {Scheme::kSP, Scheme::kFD, Scheme::kCD}) {
      const SmoothingConfig cfg{0.1, s, 16};
      EXPECT_EQ(jpspg_estimate(*game, x, cfg, 1).utility_evals, jpspg_eval_count(s, 16));
      EXPECT_EQ(spg_estimate(*game, x, cfg, 1).utility_evals, spg_eval_count(s, 16, n));
    }
    EXPECT_EQ(jpspg_eval_count(Scheme::kCD, 16), 32u);
    EXPECT_EQ(spg_eval_count(Scheme::kCD, 16, n), 32u * n);
    EXPECT_EQ(spg_eval_count(Scheme::kSP, 16, n), 16u * n);
    EXPECT_EQ(spg_eval_count(Scheme::kFD, 16, n), 16u * n + 1);
  }
}

TEST(Estimators, CountsActualCalls) {
  std::mutex mu;
  std::uint64_t calls = 0;
  auto game = std::make_shared<FunctionGame>(
      "counting", std::vector<std::size_t>{1, 2, 1},
      [&](const JointParams&, std::uint64_t, std::span<double> out) {
        std::lock_guard lock(mu);
        ++calls;
        for (double& v : out) v = 0.0;
      });
  const JointParams x(game->block_dims());
  for (auto kind : {EstimatorKind::kSPG, EstimatorKind::kJPSPG}) {
    for (Scheme s : {Scheme::kSP, Scheme::kFD, Scheme::kCD}) {
      calls = 0;
      const auto est = estimate(kind, *game, x, {0.1, s, 10}, 2);
      EXPECT_EQ(est.utility_evals, calls);
    }
  }
}

TEST(Estimators, DeterministicGivenSeed) {
  const auto game = std::make_shared<KnapsackAuction>(3, 8);
  const auto x = game->initial_params(1);
  for (auto kind : {EstimatorKind::kSPG, EstimatorKind::kJPSPG}) {
    const auto a = estimate(kind, *game, x, {0.1, Scheme::kCD, 16}, 42);
    const auto b = estimate(kind, *game, x, {0.1, Scheme::kCD, 16}, 42);
    EXPECT_EQ(a.g, b.g);
    EXPECT_EQ(a.second_moment, b.second_moment);
    const auto c = estimate(kind, *game, x, {0.1, Scheme::kCD, 16}, 43);
    EXPECT_NE(to_vec(a.g.flat()), to_vec(c.g.flat()));
  }
}

TEST(Estimators, UnbiasedOnQuadratic) {
  const auto game = QuadraticGame::random(3, 1, 0.5, 7);
  const auto x = JointParams::from_blocks({{0.4}, {-0.8}, {1.2}});
  const auto v = game.exact_gradient(x);
  for (auto kind : {EstimatorKind::kSPG, EstimatorKind::kJPSPG}) {
    const auto est = estimate(kind, game, x, {0.1, Scheme::kCD, 200000}, 3);
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_LE(std::abs(est.g.flat()[k] - v.flat()[k]), 3.0 * est.standard_error(k))
          << "kind " << static_cast<int>(kind) << " coord " << k;
    }
  }
}

TEST(Estimators, LayoutChecked) {
  const auto game = own_param_game(2);
  EXPECT_THROW(jpspg_estimate(*game, JointParams({2, 1}), {}, 1), ShapeError);
  EXPECT_THROW(spg_estimate(*game, JointParams({1}), {}, 1), ShapeError);
}

TEST(Estimators, NonFiniteUtilityThrows) {
  auto game = std::make_shared<FunctionGame>(
      "nan", std::vector<std::size_t>{1, 1},
      [](const JointParams&, std::uint64_t, std::span<double> out) {
        out[0] = std::nan("");
        out[1] = 0.0;
      });
  EXPECT_THROW(jpspg_estimate(*game, JointParams({1, 1}), {0.1, Scheme::kCD, 4}, 1), NumericError);
}
