#include "varmarest/assignment.hpp"

#include <limits>
#include <utility>

#include "varmarest/error.hpp"

namespace varmarest {

AssignmentResult solve_assignment(std::span<const double> cost, std::size_t n,
                                  const kernels::KernelTable& kernels) {
  if (cost.size() != n * n) fail(ErrorKind::SizeMismatch, "cost matrix is not n x n");
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<double> row_dual(n, 0.0), col_dual(n, 0.0), dist(n);
  std::vector<std::int64_t> pred(n, -1), scanned(n), col_owner(n, -1), row_match(n, -1);
  std::vector<std::size_t> scanned_rows, scanned_cols;
  scanned_rows.reserve(n);
  scanned_cols.reserve(n);

  for (std::size_t start = 0; start < n; ++start) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(scanned.begin(), scanned.end(), 0);
    scanned_rows.clear();
    scanned_cols.clear();

    std::size_t row = start;
    double frontier = 0.0;
    std::ptrdiff_t sink = -1;
    while (sink < 0) {
      scanned_rows.push_back(row);
      const kernels::RelaxResult step =
          kernels.relax_argmin(cost.data() + row * n, frontier, row_dual[row], col_dual.data(), dist.data(),
                               pred.data(), scanned.data(), col_owner.data(), static_cast<std::int64_t>(row), n);
      if (step.index < 0) fail(ErrorKind::Infeasible, "no augmenting path (non-finite costs?)");
      frontier = step.lowest;
      const auto col = static_cast<std::size_t>(step.index);
      scanned[col] = 1;
      scanned_cols.push_back(col);
      if (col_owner[col] < 0) {
        sink = step.index;
      } else {
        row = static_cast<std::size_t>(col_owner[col]);
      }
    }

    row_dual[start] += frontier;
    for (std::size_t r : scanned_rows) {
      if (r != start) row_dual[r] += frontier - dist[static_cast<std::size_t>(row_match[r])];
    }
    for (std::size_t c : scanned_cols) col_dual[c] -= frontier - dist[c];

    auto col = static_cast<std::int64_t>(sink);
    while (true) {
      const std::int64_t r = pred[static_cast<std::size_t>(col)];
      col_owner[static_cast<std::size_t>(col)] = r;
      std::swap(row_match[static_cast<std::size_t>(r)], col);
      if (static_cast<std::size_t>(r) == start) break;
    }
  }

  AssignmentResult result;
  result.col_for_row = std::move(row_match);
  for (std::size_t i = 0; i < n; ++i) result.cost += cost[i * n + static_cast<std::size_t>(result.col_for_row[i])];
  return result;
}

}  // namespace varmarest
