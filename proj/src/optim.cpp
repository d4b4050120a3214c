#include "zog/optim.hpp"

#include <cmath>

#include "zog/errors.hpp"

namespace zog {

std::vector<double> adabelief_update(OptimizerState& state, std::span<const double> grad) {
  if (grad.size() != state.m.size() || grad.size() != state.s.size()) {
    throw ShapeError("adabelief_update: gradient length does not match optimizer state");
  }
  for (double g : grad) {
    if (!std::isfinite(g)) throw NumericError("adabelief_update: non-finite gradient");
  }
  const auto& h = state.hyper;
  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double bc1 = 1.0 - std::pow(h.beta1, t);
  const double bc2 = 1.0 - std::pow(h.beta2, t);

  std::vector<double> delta(grad.size());
  for (std::size_t k = 0; k < grad.size(); ++k) {
    const double g = grad[k];
    double& m = state.m[k];
    double& s = state.s[k];
    m = h.beta1 * m + (1.0 - h.beta1) * g;
    const double diff = g - m;
    s = h.beta2 * s + (1.0 - h.beta2) * diff * diff + h.eps;
    const double m_hat = m / bc1;
    const double s_hat = s / bc2;
    delta[k] = h.lr * m_hat / (std::sqrt(s_hat) + h.eps);
  }
  return delta;
}

std::vector<double> sgd_update(double lr, std::span<const double> grad) {
  std::vector<double> delta(grad.size());
  for (std::size_t k = 0; k < grad.size(); ++k) delta[k] = lr * grad[k];
  return delta;
}

BlockOptimizer::BlockOptimizer(OptimizerKind kind, std::size_t dim, AdaBeliefHyper hyper)
    : kind_(kind), state_(dim, hyper) {}

std::vector<double> BlockOptimizer::delta(std::span<const double> grad) {
  if (kind_ == OptimizerKind::kSgd) {
    if (grad.size() != state_.m.size()) throw ShapeError("sgd: gradient length mismatch");
    state_.step_count += 1;
    return sgd_update(state_.hyper.lr, grad);
  }
  return adabelief_update(state_, grad);
}

}  // namespace zog
