#include <limits>

#include "kernels_internal.hpp"

namespace varmarest::kernels {

namespace {

void sqdist_row_scalar(const double* z, int dim, const double* grid, std::size_t stride, std::size_t n,
                       double* out) {
  for (std::size_t g = 0; g < n; ++g) {
    double acc = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double diff = z[k] - grid[k * stride + g];
      acc = acc + diff * diff;
    }
    out[g] = acc;
  }
}

RelaxResult relax_argmin_scalar(const double* cost, double base, double row_dual, const double* col_dual,
                                double* dist, std::int64_t* pred, const std::int64_t* scanned,
                                const std::int64_t* col_owner, std::int64_t row, std::size_t n) {
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    if (scanned[j]) continue;
    const double r = ((base + cost[j]) - row_dual) - col_dual[j];
    if (r < dist[j]) {
      dist[j] = r;
      pred[j] = row;
    }
    if (dist[j] < lowest) lowest = dist[j];
  }
  if (lowest == std::numeric_limits<double>::infinity()) return {-1, lowest};
  std::ptrdiff_t first = -1;
  for (std::size_t j = 0; j < n; ++j) {
    if (scanned[j] || dist[j] != lowest) continue;
    if (col_owner[j] < 0) return {static_cast<std::ptrdiff_t>(j), lowest};
    if (first < 0) first = static_cast<std::ptrdiff_t>(j);
  }
  return {first, lowest};
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::Scalar, sqdist_row_scalar, relax_argmin_scalar, dot_scalar};
  return table;
}

}  // namespace varmarest::kernels
