#pragma once

#include "varmarest/kernels.hpp"

namespace varmarest::kernels::detail {

#if defined(VARMA_REST_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace varmarest::kernels::detail
