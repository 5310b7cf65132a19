#include <immintrin.h>

#include <limits>

#include "kernels_internal.hpp"

namespace varmarest::kernels::detail {

namespace {

void sqdist_row_avx2(const double* z, int dim, const double* grid, std::size_t stride, std::size_t n,
                     double* out) {
  std::size_t g = 0;
  for (; g + 4 <= n; g += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int k = 0; k < dim; ++k) {
      const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(z[k]), _mm256_loadu_pd(grid + k * stride + g));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(out + g, acc);
  }
  for (; g < n; ++g) {
    double acc = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double diff = z[k] - grid[k * stride + g];
      acc = acc + diff * diff;
    }
    out[g] = acc;
  }
}

RelaxResult relax_argmin_avx2(const double* cost, double base, double row_dual, const double* col_dual,
                              double* dist, std::int64_t* pred, const std::int64_t* scanned,
                              const std::int64_t* col_owner, std::int64_t row, std::size_t n) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const __m256d vbase = _mm256_set1_pd(base);
  const __m256d vrow_dual = _mm256_set1_pd(row_dual);
  const __m256d vinf = _mm256_set1_pd(inf);
  const __m256i zero = _mm256_setzero_si256();
  const __m256d vrow = _mm256_castsi256_pd(_mm256_set1_epi64x(row));
  __m256d vmin = vinf;

  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d r = _mm256_sub_pd(_mm256_sub_pd(_mm256_add_pd(vbase, _mm256_loadu_pd(cost + j)), vrow_dual),
                                    _mm256_loadu_pd(col_dual + j));
    const __m256i sc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(scanned + j));
    const __m256d open = _mm256_castsi256_pd(_mm256_cmpeq_epi64(sc, zero));
    __m256d dj = _mm256_loadu_pd(dist + j);
    const __m256d better = _mm256_and_pd(_mm256_cmp_pd(r, dj, _CMP_LT_OQ), open);
    dj = _mm256_blendv_pd(dj, r, better);
    _mm256_storeu_pd(dist + j, dj);
    double* pred_d = reinterpret_cast<double*>(pred + j);
    _mm256_storeu_pd(pred_d, _mm256_blendv_pd(_mm256_loadu_pd(pred_d), vrow, better));
    vmin = _mm256_min_pd(vmin, _mm256_blendv_pd(vinf, dj, open));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vmin);
  double lowest = inf;
  for (double v : lanes) lowest = v < lowest ? v : lowest;
  for (; j < n; ++j) {
    if (scanned[j]) continue;
    const double r = ((base + cost[j]) - row_dual) - col_dual[j];
    if (r < dist[j]) {
      dist[j] = r;
      pred[j] = row;
    }
    if (dist[j] < lowest) lowest = dist[j];
  }
  if (lowest == inf) return {-1, lowest};

  const __m256d vlow = _mm256_set1_pd(lowest);
  std::ptrdiff_t first = -1;
  j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256i sc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(scanned + j));
    const __m256d open = _mm256_castsi256_pd(_mm256_cmpeq_epi64(sc, zero));
    const __m256d hit = _mm256_and_pd(_mm256_cmp_pd(_mm256_loadu_pd(dist + j), vlow, _CMP_EQ_OQ), open);
    const int hit_bits = _mm256_movemask_pd(hit);
    if (!hit_bits) continue;
    const __m256i owner = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(col_owner + j));
    const __m256d free_cols = _mm256_castsi256_pd(_mm256_cmpgt_epi64(zero, owner));
    const int free_bits = hit_bits & _mm256_movemask_pd(free_cols);
    if (free_bits) return {static_cast<std::ptrdiff_t>(j) + __builtin_ctz(free_bits), lowest};
    if (first < 0) first = static_cast<std::ptrdiff_t>(j) + __builtin_ctz(hit_bits);
  }
  for (; j < n; ++j) {
    if (scanned[j] || dist[j] != lowest) continue;
    if (col_owner[j] < 0) return {static_cast<std::ptrdiff_t>(j), lowest};
    if (first < 0) first = static_cast<std::ptrdiff_t>(j);
  }
  return {first, lowest};
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_add_pd(a0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    a1 = _mm256_add_pd(a1, _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(a0, a1));
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Isa::Avx2, sqdist_row_avx2, relax_argmin_avx2, dot_avx2};
  return table;
}

}  // namespace varmarest::kernels::detail
