#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"

namespace varmarest::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* table_for(Isa isa) {
  if (!cpu_supports(isa)) return nullptr;
  switch (isa) {
    case Isa::Scalar: return &scalar_table();
    case Isa::Avx2:
#if defined(VARMA_REST_HAVE_AVX2)
      return &detail::avx2_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

namespace {

const KernelTable& select() {
  if (const char* env = std::getenv("VARMA_REST_ISA")) {
    const std::string wanted(env);
    for (Isa isa : {Isa::Scalar, Isa::Avx2}) {
      if (wanted == to_string(isa)) {
        if (const KernelTable* t = table_for(isa)) return *t;
      }
    }
  }
  if (const KernelTable* t = table_for(Isa::Avx2)) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

}  // namespace varmarest::kernels
