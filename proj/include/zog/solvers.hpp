#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace zog {

// Dense row-major matrix of bids, rows are bidders, columns items.
struct BidMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  BidMatrix() = default;
  BidMatrix(std::size_t r, std::size_t c, std::vector<double> v)
      : rows(r), cols(c), values(std::move(v)) {}

  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

struct Assignment {
  // row_to_col[i] is the column assigned to row i, or -1 when unassigned.
  std::vector<int> row_to_col;
  double value = 0.0;
};

// Maximum-weight partial matching: every row and column used at most once,
// pairs with non-positive bids are left unassigned. Shortest augmenting path
// (Jonker-Volgenant style) on the rectangular problem, O(n^2 m).
Assignment solve_assignment(const BidMatrix& bids);

struct KnapsackSolution {
  std::vector<bool> selected;
  double value = 0.0;
};

// Exact 0/1 knapsack with real-valued sizes via depth-first branch and bound.
// Items with non-positive bids are never selected. Among optimal selections
// the one preferring lower-index items is returned. Objective and used
// capacity are accumulated in index order.
KnapsackSolution solve_knapsack(std::span<const double> bids, std::span<const double> sizes,
                                double capacity);

}  // namespace zog
