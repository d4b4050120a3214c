#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "zog/errors.hpp"

namespace zog {

// Per-player parameter blocks stored contiguously in player order.
class JointParams {
 public:
  JointParams() : offsets_{0} {}

  explicit JointParams(const std::vector<std::size_t>& dims) : offsets_{0} {
    for (std::size_t d : dims) offsets_.push_back(offsets_.back() + d);
    values_.assign(offsets_.back(), 0.0);
  }

  static JointParams from_blocks(const std::vector<std::vector<double>>& blocks) {
    std::vector<std::size_t> dims;
    for (const auto& b : blocks) dims.push_back(b.size());
    JointParams x(dims);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      std::copy(blocks[i].begin(), blocks[i].end(), x.block(i).begin());
    }
    return x;
  }

  std::size_t num_blocks() const { return offsets_.size() - 1; }
  std::size_t size() const { return values_.size(); }
  std::size_t offset(std::size_t i) const { return offsets_[i]; }
  std::size_t block_dim(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }

  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (std::size_t i = 0; i < num_blocks(); ++i) d.push_back(block_dim(i));
    return d;
  }

  std::span<double> block(std::size_t i) {
    return std::span<double>(values_).subspan(offsets_[i], block_dim(i));
  }
  std::span<const double> block(std::size_t i) const {
    return std::span<const double>(values_).subspan(offsets_[i], block_dim(i));
  }

  std::span<double> flat() { return values_; }
  std::span<const double> flat() const { return values_; }

  bool same_layout(const JointParams& other) const { return offsets_ == other.offsets_; }

  bool operator==(const JointParams&) const = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<double> values_;
};

}  // namespace zog
