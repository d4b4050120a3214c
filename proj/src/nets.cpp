#include "zog/nets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zog/errors.hpp"
#include "zog/rng.hpp"

namespace zog {

NetSpec::NetSpec(std::size_t input_dim, std::size_t hidden_dim, std::size_t output_dim,
                 OutputSquash squash)
    : input_dim_(input_dim), hidden_dim_(hidden_dim), output_dim_(output_dim), squash_(squash) {
  if (input_dim == 0 || hidden_dim == 0 || output_dim == 0) {
    throw ShapeError("NetSpec dimensions must be positive");
  }
}

std::size_t NetSpec::param_count() const {
  return input_dim_ * hidden_dim_ + hidden_dim_ + hidden_dim_ * output_dim_ + output_dim_;
}

std::size_t param_count(const NetSpec& spec) { return spec.param_count(); }

ParamBlock init_params(const NetSpec& spec, std::uint64_t seed) {
  ParamBlock params(spec.param_count(), 0.0);
  Engine engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const double std1 = std::sqrt(2.0 / static_cast<double>(spec.input_dim()));
  for (std::size_t k = 0; k < spec.input_dim() * spec.hidden_dim(); ++k) {
    params[spec.w1_offset() + k] = std1 * normal(engine);
  }
  const double std2 = std::sqrt(2.0 / static_cast<double>(spec.hidden_dim()));
  for (std::size_t k = 0; k < spec.hidden_dim() * spec.output_dim(); ++k) {
    params[spec.w2_offset() + k] = std2 * normal(engine);
  }
  return params;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logit(double p) { return std::log(p / (1.0 - p)); }

namespace {

// Sigmoid kept strictly inside (0,1) where double rounding would saturate.
double squash_open(double x) {
  static const double kHigh = std::nextafter(1.0, 0.0);
  return std::clamp(sigmoid(x), std::numeric_limits<double>::min(), kHigh);
}

}  // namespace

void forward(const NetSpec& spec, std::span<const double> params, std::span<const double> input,
             std::span<double> out) {
  if (params.size() != spec.param_count()) {
    throw ShapeError("forward: expected " + std::to_string(spec.param_count()) +
                     " parameters, got " + std::to_string(params.size()));
  }
  if (input.size() != spec.input_dim()) {
    throw ShapeError("forward: expected input of length " + std::to_string(spec.input_dim()) +
                     ", got " + std::to_string(input.size()));
  }
  if (out.size() != spec.output_dim()) {
    throw ShapeError("forward: output buffer has wrong length");
  }

  constexpr std::size_t kStackHidden = 256;
  double stack_hidden[kStackHidden];
  std::vector<double> heap_hidden;
  double* hidden = stack_hidden;
  if (spec.hidden_dim() > kStackHidden) {
    heap_hidden.resize(spec.hidden_dim());
    hidden = heap_hidden.data();
  }

  const double* w1 = params.data() + spec.w1_offset();
  const double* b1 = params.data() + spec.b1_offset();
  const double* w2 = params.data() + spec.w2_offset();
  const double* b2 = params.data() + spec.b2_offset();
  const std::size_t in = spec.input_dim();
  const std::size_t hid = spec.hidden_dim();

  for (std::size_t h = 0; h < hid; ++h) {
    double acc = b1[h];
    const double* row = w1 + h * in;
    for (std::size_t k = 0; k < in; ++k) acc += row[k] * input[k];
    hidden[h] = acc > 0.0 ? acc : 0.0;
  }
  for (std::size_t o = 0; o < spec.output_dim(); ++o) {
    double acc = b2[o];
    const double* row = w2 + o * hid;
    for (std::size_t h = 0; h < hid; ++h) acc += row[h] * hidden[h];
    out[o] = spec.squash() == OutputSquash::kUnitInterval ? squash_open(acc) : acc;
  }
}

std::vector<double> forward(const NetSpec& spec, std::span<const double> params,
                            std::span<const double> input) {
  std::vector<double> out(spec.output_dim());
  forward(spec, params, input, out);
  return out;
}

double forward_scalar(const NetSpec& spec, std::span<const double> params,
                      std::span<const double> input) {
  if (spec.output_dim() != 1) throw ShapeError("forward_scalar: output_dim must be 1");
  double out = 0.0;
  forward(spec, params, input, std::span<double>(&out, 1));
  return out;
}

namespace {

double to_pre_squash(const NetSpec& spec, double value) {
  if (spec.squash() == OutputSquash::kNone) return value;
  if (!(value > 0.0 && value < 1.0)) {
    throw NumericError("unit-interval output must lie strictly inside (0,1)");
  }
  return logit(value);
}

}  // namespace

ParamBlock constant_output_params(const NetSpec& spec, double value) {
  if (spec.output_dim() != 1) throw ShapeError("constant_output_params: output_dim must be 1");
  ParamBlock params(spec.param_count(), 0.0);
  params[spec.b2_offset()] = to_pre_squash(spec, value);
  return params;
}

ParamBlock piecewise_linear_params(const NetSpec& spec, std::span<const double> knots,
                                   std::span<const double> pre_squash) {
  if (spec.input_dim() != 1 || spec.output_dim() != 1) {
    throw ShapeError("piecewise_linear_params: needs a 1-in/1-out net");
  }
  if (knots.size() != pre_squash.size() || knots.size() < 2) {
    throw ShapeError("piecewise_linear_params: need at least two matching knots");
  }
  if (knots.size() - 1 > spec.hidden_dim()) {
    throw ShapeError("piecewise_linear_params: too many knots for hidden layer");
  }
  ParamBlock params(spec.param_count(), 0.0);
  params[spec.b2_offset()] = pre_squash[0];
  double prev_slope = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double width = knots[k + 1] - knots[k];
    if (!(width > 0.0)) throw ShapeError("piecewise_linear_params: knots must increase");
    const double slope = (pre_squash[k + 1] - pre_squash[k]) / width;
    params[spec.w1_offset() + k] = 1.0;
    params[spec.b1_offset() + k] = -knots[k];
    params[spec.w2_offset() + k] = slope - prev_slope;
    prev_slope = slope;
  }
  return params;
}

}  // namespace zog
