#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "zog/errors.hpp"
#include "zog/optim.hpp"

using namespace zog;

TEST(AdaBelief, ZeroGradientZeroDelta) {
  OptimizerState st(4, AdaBeliefHyper{});
  for (double d : adabelief_update(st, std::vector<double>(4, 0.0))) EXPECT_EQ(d, 0.0);
}

TEST(AdaBelief, FirstStepHandValue) {
  // m = 0.1, s = 0.001 * 0.9^2 + eps; m_hat = 1, s_hat = 0.81; delta = lr / 0.9.
  OptimizerState st(1, AdaBeliefHyper{1e-4, 0.9, 0.999, 1e-16});
  const double m = 0.1, s = 0.001 * 0.81 + 1e-16;
  const double want = 1e-4 * (m / 0.1) / (std::sqrt(s / 0.001) + 1e-16);
  const auto d = adabelief_update(st, std::vector<double>{1.0});
  EXPECT_NEAR(d[0], want, 1e-18);
  EXPECT_NEAR(d[0], 1.1111e-4, 1e-8);
  EXPECT_EQ(st.step_count, 1u);
}

TEST(AdaBelief, SecondStepMatchesRecurrence) {
  const AdaBeliefHyper h{1e-3, 0.9, 0.999, 1e-16};
  OptimizerState st(1, h);
  const std::vector<double> gs{0.5, -1.5};
  double m = 0, s = 0, last = 0;
  for (std::size_t t = 1; t <= gs.size(); ++t) {
    const double g = gs[t - 1];
    m = h.beta1 * m + (1 - h.beta1) * g;
    s = h.beta2 * s + (1 - h.beta2) * (g - m) * (g - m) + h.eps;
    const double mh = m / (1 - std::pow(h.beta1, t));
    const double sh = s / (1 - std::pow(h.beta2, t));
    last = h.lr * mh / (std::sqrt(sh) + h.eps);
    const auto d = adabelief_update(st, std::vector<double>{g});
    EXPECT_NEAR(d[0], last, 1e-15);
  }
}

TEST(AdaBelief, Deterministic) {
  OptimizerState a(3, {}), b(3, {});
  const std::vector<double> g{0.3, -2.0, 7.0};
  EXPECT_EQ(adabelief_update(a, g), adabelief_update(b, g));
  EXPECT_EQ(a.m, b.m);
  EXPECT_EQ(a.s, b.s);
}

TEST(AdaBelief, PermutationInvariant) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  const std::size_t n = 6;
  const std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
  OptimizerState a(n, {}), b(n, {});
  for (int t = 0; t < 10; ++t) {
    std::vector<double> g(n), gp(n);
    for (double& x : g) x = nd(rng);
    for (std::size_t k = 0; k < n; ++k) gp[k] = g[perm[k]];
    const auto da = adabelief_update(a, g);
    const auto db = adabelief_update(b, gp);
    for (std::size_t k = 0; k < n; ++k) EXPECT_EQ(db[k], da[perm[k]]);
  }
}

TEST(AdaBelief, FirstStepBoundedByLr) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ud(-100.0, 100.0);
  for (int t = 0; t < 200; ++t) {
    OptimizerState st(5, AdaBeliefHyper{1e-3, 0.9, 0.999, 1e-16});
    std::vector<double> g(5);
    for (double& x : g) x = ud(rng);
    for (double d : adabelief_update(st, g)) EXPECT_LE(std::abs(d), 1e-3 * (1 + 0.12));
  }
}

TEST(AdaBelief, Errors) {
  OptimizerState st(2, {});
  EXPECT_THROW(adabelief_update(st, std::vector<double>{1.0}), ShapeError);
  EXPECT_THROW(adabelief_update(st, std::vector<double>{1.0, std::nan("")}), NumericError);
  EXPECT_THROW(
      adabelief_update(st, std::vector<double>{std::numeric_limits<double>::infinity(), 0.0}),
      NumericError);
}

TEST(Sgd, Examples) {
  EXPECT_EQ(sgd_update(0.5, std::vector<double>{2, -4}), (std::vector<double>{1, -2}));
  EXPECT_EQ(sgd_update(1e-4, std::vector<double>{0.0}), (std::vector<double>{0.0}));
  const std::vector<double> g{0.25, -3.5, 9.0};
  EXPECT_EQ(sgd_update(1.0, g), g);
}

TEST(BlockOptimizer, Dispatch) {
  BlockOptimizer sgd(OptimizerKind::kSgd, 2, AdaBeliefHyper{0.5});
  EXPECT_EQ(sgd.delta(std::vector<double>{2, -4}), (std::vector<double>{1, -2}));
  BlockOptimizer ada(OptimizerKind::kAdaBelief, 1, AdaBeliefHyper{});
  EXPECT_NEAR(ada.delta(std::vector<double>{1.0})[0], 1.1111e-4, 1e-8);
}
