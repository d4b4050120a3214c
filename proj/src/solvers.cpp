#include "zog/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zog/errors.hpp"

namespace zog {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericError(std::string(what) + ": non-finite input");
  }
}

// Rectangular min-cost assignment with rows <= cols; every row gets a column.
// Returns col4row.
std::vector<int> min_cost_assignment(std::size_t nr, std::size_t nc,
                                     const std::vector<double>& cost) {
  std::vector<double> u(nr, 0.0), v(nc, 0.0), shortest(nc, kInf);
  std::vector<int> path(nc, -1), col4row(nr, -1), row4col(nc, -1);
  std::vector<char> row_seen(nr, 0), col_seen(nc, 0);
  std::vector<std::size_t> remaining(nc);

  for (std::size_t cur_row = 0; cur_row < nr; ++cur_row) {
    double min_val = 0.0;
    std::size_t num_remaining = nc;
    for (std::size_t it = 0; it < nc; ++it) remaining[it] = nc - it - 1;
    std::fill(row_seen.begin(), row_seen.end(), 0);
    std::fill(col_seen.begin(), col_seen.end(), 0);
    std::fill(shortest.begin(), shortest.end(), kInf);

    int sink = -1;
    std::size_t i = cur_row;
    while (sink == -1) {
      std::size_t index = 0;
      double lowest = kInf;
      bool found = false;
      row_seen[i] = 1;
      for (std::size_t it = 0; it < num_remaining; ++it) {
        const std::size_t j = remaining[it];
        const double reduced = min_val + cost[i * nc + j] - u[i] - v[j];
        if (reduced < shortest[j]) {
          path[j] = static_cast<int>(i);
          shortest[j] = reduced;
        }
        if (shortest[j] < lowest || (shortest[j] == lowest && row4col[j] == -1)) {
          lowest = shortest[j];
          index = it;
          found = true;
        }
      }
      min_val = lowest;
      if (!found || min_val == kInf) throw NumericError("solve_assignment: infeasible problem");
      const std::size_t j = remaining[index];
      if (row4col[j] == -1) {
        sink = static_cast<int>(j);
      } else {
        i = static_cast<std::size_t>(row4col[j]);
      }
      col_seen[j] = 1;
      remaining[index] = remaining[--num_remaining];
    }

    u[cur_row] += min_val;
    for (std::size_t r = 0; r < nr; ++r) {
      if (row_seen[r] && r != cur_row) u[r] += min_val - shortest[col4row[r]];
    }
    for (std::size_t c = 0; c < nc; ++c) {
      if (col_seen[c]) v[c] -= min_val - shortest[c];
    }

    int j = sink;
    while (true) {
      const int r = path[j];
      row4col[j] = r;
      std::swap(col4row[r], j);
      if (r == static_cast<int>(cur_row)) break;
    }
  }
  return col4row;
}

}  // namespace

Assignment solve_assignment(const BidMatrix& bids) {
  if (bids.values.size() != bids.rows * bids.cols) {
    throw ShapeError("solve_assignment: matrix storage does not match its shape");
  }
  require_finite(bids.values, "solve_assignment");

  Assignment result;
  result.row_to_col.assign(bids.rows, -1);
  if (bids.rows == 0 || bids.cols == 0) return result;

  // Leaving a pair unassigned is worth 0, so clipping bids at zero turns the
  // "at most one" problem into a full rectangular assignment.
  const bool transpose = bids.rows > bids.cols;
  const std::size_t nr = transpose ? bids.cols : bids.rows;
  const std::size_t nc = transpose ? bids.rows : bids.cols;
  std::vector<double> cost(nr * nc);
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      const double b = transpose ? bids.at(c, r) : bids.at(r, c);
      cost[r * nc + c] = -std::max(b, 0.0);
    }
  }
  const std::vector<int> col4row = min_cost_assignment(nr, nc, cost);

  for (std::size_t r = 0; r < nr; ++r) {
    const std::size_t row = transpose ? static_cast<std::size_t>(col4row[r]) : r;
    const std::size_t col = transpose ? r : static_cast<std::size_t>(col4row[r]);
    if (bids.at(row, col) > 0.0) result.row_to_col[row] = static_cast<int>(col);
  }
  for (std::size_t row = 0; row < bids.rows; ++row) {
    if (result.row_to_col[row] >= 0) {
      result.value += bids.at(row, static_cast<std::size_t>(result.row_to_col[row]));
    }
  }
  return result;
}

namespace {

class KnapsackSearch {
 public:
  KnapsackSearch(std::span<const double> bids, std::span<const double> sizes, double capacity)
      : bids_(bids), sizes_(sizes), capacity_(capacity), current_(bids.size(), false) {
    for (std::size_t i = 0; i < bids.size(); ++i) {
      if (bids[i] > 0.0) by_ratio_.push_back(i);
    }
    // Zero-size items have infinite ratio and sort first.
    std::stable_sort(by_ratio_.begin(), by_ratio_.end(), [&](std::size_t a, std::size_t b) {
      return bids_[a] * sizes_[b] > bids_[b] * sizes_[a];
    });
    best_.selected.assign(bids.size(), false);
  }

  KnapsackSolution run() {
    search(0, 0.0, 0.0);
    return best_;
  }

 private:
  // Fractional relaxation over items [depth, n) with the remaining capacity.
  double bound(std::size_t depth, double value, double used) const {
    double room = capacity_ - used;
    double total = value;
    for (std::size_t item : by_ratio_) {
      if (item < depth) continue;
      if (sizes_[item] <= room) {
        room -= sizes_[item];
        total += bids_[item];
      } else {
        total += bids_[item] * (room / sizes_[item]);
        break;
      }
    }
    return total;
  }

  void search(std::size_t depth, double value, double used) {
    if (depth == bids_.size()) {
      if (!found_ || value > best_.value) {
        found_ = true;
        best_.value = value;
        best_.selected = current_;
      }
      return;
    }
    if (found_) {
      const double slack = 1e-9 * (1.0 + std::abs(best_.value));
      if (bound(depth, value, used) < best_.value - slack) return;
    }
    // Include-first DFS visits lower-index-preferring selections first; later
    // ties never replace the incumbent.
    if (bids_[depth] > 0.0 && used + sizes_[depth] <= capacity_) {
      current_[depth] = true;
      search(depth + 1, value + bids_[depth], used + sizes_[depth]);
      current_[depth] = false;
    }
    search(depth + 1, value, used);
  }

  std::span<const double> bids_;
  std::span<const double> sizes_;
  double capacity_;
  std::vector<std::size_t> by_ratio_;
  std::vector<bool> current_;
  KnapsackSolution best_;
  bool found_ = false;
};

}  // namespace

KnapsackSolution solve_knapsack(std::span<const double> bids, std::span<const double> sizes,
                                double capacity) {
  if (bids.size() != sizes.size()) throw ShapeError("solve_knapsack: bids/sizes length mismatch");
  require_finite(bids, "solve_knapsack");
  require_finite(sizes, "solve_knapsack");
  if (!std::isfinite(capacity)) throw NumericError("solve_knapsack: non-finite capacity");
  for (double c : sizes) {
    if (c < 0.0) throw ShapeError("solve_knapsack: sizes must be non-negative");
  }
  if (capacity < 0.0) throw ShapeError("solve_knapsack: capacity must be non-negative");
  return KnapsackSearch(bids, sizes, capacity).run();
}

}  // namespace zog
