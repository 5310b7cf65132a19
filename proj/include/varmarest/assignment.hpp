#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "varmarest/kernels.hpp"

namespace varmarest {

struct AssignmentResult {
  std::vector<std::int64_t> col_for_row;
  /// sum_i cost(i, col_for_row[i]), accumulated in row order.
  double cost = 0.0;
};

/// Exact minimum-cost perfect matching for a dense n x n row-major cost
/// matrix: shortest augmenting paths (Dijkstra with dual potentials), one
/// augmentation per row. O(n^3) worst case. Among equal-cost frontier columns
/// the search prefers free columns and then the lowest column index, so the
/// output is a deterministic function of the cost matrix.
AssignmentResult solve_assignment(std::span<const double> cost, std::size_t n,
                                  const kernels::KernelTable& kernels = kernels::active());

}  // namespace varmarest
