#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace zog {

enum class OutputSquash { kUnitInterval, kNone };

// Single-hidden-layer ReLU network. Flat parameter layout, layer-major with
// weights before biases:
//   [W1 (hidden x input, row per hidden unit) | b1 | W2 (output x hidden) | b2]
class NetSpec {
 public:
  NetSpec(std::size_t input_dim, std::size_t hidden_dim, std::size_t output_dim,
          OutputSquash squash = OutputSquash::kUnitInterval);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t hidden_dim() const { return hidden_dim_; }
  std::size_t output_dim() const { return output_dim_; }
  OutputSquash squash() const { return squash_; }

  std::size_t param_count() const;

  // Offsets of each section in the flat layout.
  std::size_t w1_offset() const { return 0; }
  std::size_t b1_offset() const { return input_dim_ * hidden_dim_; }
  std::size_t w2_offset() const { return b1_offset() + hidden_dim_; }
  std::size_t b2_offset() const { return w2_offset() + hidden_dim_ * output_dim_; }

  bool operator==(const NetSpec&) const = default;

 private:
  std::size_t input_dim_;
  std::size_t hidden_dim_;
  std::size_t output_dim_;
  OutputSquash squash_;
};

using ParamBlock = std::vector<double>;

std::size_t param_count(const NetSpec& spec);

// He-normal weights (std sqrt(2 / fan_in) per layer), zero biases.
ParamBlock init_params(const NetSpec& spec, std::uint64_t seed);

// Writes output_dim values into `out`. Throws ShapeError on any length mismatch.
void forward(const NetSpec& spec, std::span<const double> params, std::span<const double> input,
             std::span<double> out);

std::vector<double> forward(const NetSpec& spec, std::span<const double> params,
                            std::span<const double> input);

// Scalar convenience for output_dim == 1.
double forward_scalar(const NetSpec& spec, std::span<const double> params,
                      std::span<const double> input);

double sigmoid(double x);
double logit(double p);

// Parameters whose squashed output is the constant `value` for every input.
// Requires output_dim == 1 and, for unit-interval squash, value in (0,1).
ParamBlock constant_output_params(const NetSpec& spec, double value);

// Parameters for a 1-in/1-out net whose pre-squash output is the piecewise
// linear interpolant through (knots[k], pre_squash[k]), constant below the
// first knot. Knots must be strictly increasing and fit in the hidden layer.
ParamBlock piecewise_linear_params(const NetSpec& spec, std::span<const double> knots,
                                   std::span<const double> pre_squash);

}  // namespace zog
