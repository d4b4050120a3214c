#include <gtest/gtest.h>

#include <cmath>

#include "zog/dynamics.hpp"
#include "zog/errors.hpp"
#include "zog/games.hpp"

using namespace zog;

namespace {

GradientEstimate fixed(std::vector<std::vector<double>> blocks) {
  GradientEstimate e;
  e.g = JointParams::from_blocks(blocks);
  e.samples = 1;
  return e;
}

DynamicsConfig sgd_config(Method m, double alpha, std::uint64_t iters = 1) {
  DynamicsConfig cfg;
  cfg.method = m;
  cfg.alpha = alpha;
  cfg.iterations = iters;
  cfg.optimizer = OptimizerKind::kSgd;
  return cfg;
}

double norm(const JointParams& x) {
  double s = 0;
  for (double v : x.flat()) s += v * v;
  return std::sqrt(s);
}

// Straight-line reference trajectories on u = (x1 x2, -x1 x2).
struct Point {
  double a, b;
};
Point v(Point p) { return {p.b, -p.a}; }

Point reference(Method m, double alpha, int steps) {
  Point p{1.0, 1.0}, prev = v(p);
  for (int t = 0; t < steps; ++t) {
    const Point g = v(p);
    if (m == Method::kSGA) {
      p = {p.a + alpha * g.a, p.b + alpha * g.b};
    } else if (m == Method::kOGA) {
      p = {p.a + alpha * (2 * g.a - prev.a), p.b + alpha * (2 * g.b - prev.b)};
    } else {
      const Point h{p.a + alpha * g.a, p.b + alpha * g.b};
      const Point gh = v(h);
      p = {p.a + alpha * gh.a, p.b + alpha * gh.b};
    }
    prev = g;
  }
  return p;
}

}  // namespace

TEST(Sga, ScalarStep) {
  const auto cfg = sgd_config(Method::kSGA, 0.5);
  auto st = TrainState::initial(JointParams::from_blocks({{1.0}}), cfg);
  st = sga_step(std::move(st), fixed({{-1.0}}));
  EXPECT_EQ(st.x.flat()[0], 0.5);
  st = sga_step(std::move(st), fixed({{0.0}}));
  EXPECT_EQ(st.x.flat()[0], 0.5);
  EXPECT_EQ(st.t, 2u);
}

TEST(Sga, GeometricContraction) {
  const auto cfg = sgd_config(Method::kSGA, 0.5, 20);
  const GradientSource minus_x = [](const JointParams& x, std::uint64_t) {
    return fixed({{-x.flat()[0]}});
  };
  const auto res = train(minus_x, JointParams::from_blocks({{1.0}}), cfg, 0);
  EXPECT_EQ(res.state.x.flat()[0], std::pow(0.5, 20));
  ASSERT_EQ(res.history.size(), 20u);
}

TEST(Oga, FirstStepEqualsSga) {
  const auto cfg = sgd_config(Method::kOGA, 0.3);
  const auto x0 = JointParams::from_blocks({{1.0, 2.0}, {-1.0}});
  const auto g = fixed({{0.5, -0.25}, {2.0}});
  const auto a = oga_step(TrainState::initial(x0, cfg), g, cfg);
  const auto b = sga_step(TrainState::initial(x0, cfg), g);
  EXPECT_EQ(a.x, b.x);
}

TEST(Oga, HandArithmetic) {
  auto cfg = sgd_config(Method::kOGA, 1.0);
  cfg.beta = 1.0;
  auto st = TrainState::initial(JointParams::from_blocks({{0.0}}), cfg);
  st.prev_grad = JointParams::from_blocks({{1.0}});
  st = oga_step(std::move(st), fixed({{2.0}}), cfg);
  EXPECT_EQ(st.x.flat()[0], 3.0);
}

TEST(Eg, ZeroAndConstantGradients) {
  const auto cfg = sgd_config(Method::kEG, 0.1);
  const GradientSource zero = [](const JointParams& x, std::uint64_t) {
    GradientEstimate e;
    e.g = JointParams(x.dims());
    return e;
  };
  const GradientSource constant = [](const JointParams&, std::uint64_t) {
    return fixed({{2.0}, {-1.0}});
  };
  const auto x0 = JointParams::from_blocks({{1.0}, {1.0}});
  EXPECT_EQ(eg_step(TrainState::initial(x0, cfg), zero, 0).state.x, x0);
  const auto st = eg_step(TrainState::initial(x0, cfg), constant, 0).state;
  EXPECT_NEAR(st.x.flat()[0], 1.2, 1e-15);
  EXPECT_NEAR(st.x.flat()[1], 0.9, 1e-15);
}

TEST(Bilinear, TrajectoriesMatchReference) {
  const auto game = bilinear_game();
  const auto source = exact_gradient_source(*game);
  for (Method m : {Method::kSGA, Method::kOGA, Method::kEG}) {
    const auto res = train(source, JointParams::from_blocks({{1.0}, {1.0}}),
                           sgd_config(m, 0.1, 500), 0);
    const Point want = reference(m, 0.1, 500);
    EXPECT_NEAR(res.state.x.flat()[0], want.a, 1e-10);
    EXPECT_NEAR(res.state.x.flat()[1], want.b, 1e-10);
  }
}

TEST(Bilinear, SgaDoesNotContract) {
  const auto game = bilinear_game();
  const auto res = train(exact_gradient_source(*game), JointParams::from_blocks({{1.0}, {1.0}}),
                         sgd_config(Method::kSGA, 0.1, 500), 0);
  EXPECT_GE(norm(res.state.x), std::sqrt(2.0));
}

TEST(Bilinear, OgaAndEgContract) {
  const auto game = bilinear_game();
  for (Method m : {Method::kOGA, Method::kEG}) {
    const auto res = train(exact_gradient_source(*game), JointParams::from_blocks({{1.0}, {1.0}}),
                           sgd_config(m, 0.1, 500), 0);
    EXPECT_LT(norm(res.state.x), 0.5 * std::sqrt(2.0));
  }
}

TEST(Train, IterationAccounting) {
  const auto game = std::make_shared<QuadraticGame>(QuadraticGame::random(3, 2, 0.3, 1));
  DynamicsConfig cfg;
  cfg.iterations = 1;
  SmoothingConfig sm{0.1, Scheme::kCD, 8};
  auto one = train(*game, cfg, sm, EstimatorKind::kJPSPG, 0);
  EXPECT_EQ(one.history.size(), 1u);
  cfg.iterations = 0;
  EXPECT_THROW(train(*game, cfg, sm, EstimatorKind::kJPSPG, 0), ConfigError);

  cfg.iterations = 7;
  for (Method m : {Method::kSGA, Method::kOGA}) {
    cfg.method = m;
    const auto j = train(*game, cfg, sm, EstimatorKind::kJPSPG, 0);
    const auto s = train(*game, cfg, sm, EstimatorKind::kSPG, 0);
    EXPECT_EQ(j.history.back().utility_evals, 2u * 8 * 7);
    EXPECT_EQ(s.history.back().utility_evals, 2u * 3 * 8 * 7);
    for (std::size_t t = 1; t < j.history.size(); ++t) {
      EXPECT_GT(j.history[t].utility_evals, j.history[t - 1].utility_evals);
      EXPECT_GE(j.history[t].wall_time_s, j.history[t - 1].wall_time_s);
    }
  }
  cfg.method = Method::kEG;
  EXPECT_EQ(train(*game, cfg, sm, EstimatorKind::kJPSPG, 0).history.back().utility_evals,
            2u * 2 * 8 * 7);
}

TEST(Train, GradientSourceSwapOnlyChangesSource) {
  // A mocked source ignoring the estimator kind yields identical trajectories.
  const GradientSource mock = [](const JointParams& x, std::uint64_t seed) {
    GradientEstimate e;
    e.g = JointParams(x.dims());
    for (std::size_t k = 0; k < x.size(); ++k) e.g.flat()[k] = std::sin(double(seed % 97) + k);
    return e;
  };
  DynamicsConfig cfg;
  cfg.iterations = 25;
  const auto x0 = JointParams::from_blocks({{0.1, 0.2}, {0.3}});
  EXPECT_EQ(train(mock, x0, cfg, 5).state.x, train(mock, x0, cfg, 5).state.x);
}

TEST(Train, DivergenceRaises) {
  const GradientSource blowup = [](const JointParams& x, std::uint64_t) {
    GradientEstimate e;
    e.g = JointParams(x.dims());
    for (std::size_t k = 0; k < x.size(); ++k) e.g.flat()[k] = 1e308 + std::abs(x.flat()[k]) * 1e308;
    return e;
  };
  auto cfg = sgd_config(Method::kSGA, 10.0, 5);
  EXPECT_THROW(train(blowup, JointParams::from_blocks({{1.0}}), cfg, 0), NumericError);
}

TEST(Train, Deterministic) {
  const auto game = std::make_shared<FirstPriceAuction>(2, 8);
  DynamicsConfig cfg;
  cfg.iterations = 5;
  cfg.alpha = 1e-2;
  const SmoothingConfig sm{0.1, Scheme::kCD, 16};
  EXPECT_EQ(train(*game, cfg, sm, EstimatorKind::kJPSPG, 9).state.x,
            train(*game, cfg, sm, EstimatorKind::kJPSPG, 9).state.x);
}
