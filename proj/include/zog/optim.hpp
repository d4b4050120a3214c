#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace zog {

struct AdaBeliefHyper {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-16;
};

// AdaBelief moments for one parameter block.
struct OptimizerState {
  std::uint64_t step_count = 0;
  std::vector<double> m;
  std::vector<double> s;
  AdaBeliefHyper hyper;

  OptimizerState() = default;
  OptimizerState(std::size_t dim, AdaBeliefHyper h) : m(dim, 0.0), s(dim, 0.0), hyper(h) {}
};

// One AdaBelief step. Updates `state` in place and returns the delta to ADD to
// the parameters (ascent convention). Throws NumericError on non-finite grads.
std::vector<double> adabelief_update(OptimizerState& state, std::span<const double> grad);

std::vector<double> sgd_update(double lr, std::span<const double> grad);

enum class OptimizerKind { kAdaBelief, kSgd };

// Per-block optimizer that dispatches on kind; sgd ignores the moment state.
class BlockOptimizer {
 public:
  BlockOptimizer(OptimizerKind kind, std::size_t dim, AdaBeliefHyper hyper);

  std::vector<double> delta(std::span<const double> grad);

  OptimizerKind kind() const { return kind_; }
  const OptimizerState& state() const { return state_; }

 private:
  OptimizerKind kind_;
  OptimizerState state_;
};

}  // namespace zog
