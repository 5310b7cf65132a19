#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops behind the assignment solver and the rank
// cross-covariances. Each kernel has a scalar reference implementation and
// optional SIMD variants; the best available one is picked at runtime.
//
// Contract: sqdist_row and relax_argmin give bit-identical results across
// variants (same operation order, no contraction into FMA). dot may differ
// by rounding only.
namespace varmarest::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct RelaxResult {
  std::ptrdiff_t index;  // -1 when every unscanned entry is +inf
  double lowest;
};

struct KernelTable {
  Isa isa;

  /// out[g] = sum_k (z[k] - grid[k * stride + g])^2 for g in [0, n); the grid
  /// is stored coordinate-major (structure of arrays).
  void (*sqdist_row)(const double* z, int dim, const double* grid, std::size_t stride,
                     std::size_t n, double* out);

  /// One Dijkstra step of the shortest augmenting path solver. For every j with
  /// scanned[j] == 0:
  ///   r = ((base + cost[j]) - row_dual) - col_dual[j]
  ///   if r < dist[j]: dist[j] = r, pred[j] = row
  /// then returns the unscanned j minimising dist[j], preferring free
  /// columns (col_owner[j] < 0) and then the lowest index among ties.
  RelaxResult (*relax_argmin)(const double* cost, double base, double row_dual, const double* col_dual,
                              double* dist, std::int64_t* pred, const std::int64_t* scanned,
                              const std::int64_t* col_owner, std::int64_t row, std::size_t n);

  double (*dot)(const double* x, const double* y, std::size_t n);
};

const KernelTable& scalar_table();

/// nullptr when the variant was not compiled in or the CPU lacks it.
const KernelTable* table_for(Isa isa);

/// The variant used by the library. Honors VARMA_REST_ISA=scalar|avx2 when set
/// and available.
const KernelTable& active();

bool cpu_supports(Isa isa);

}  // namespace varmarest::kernels
