#include <cstdlib>
#include <string_view>

#include "adm/simd/kernels.hpp"

namespace adm::simd {

#ifndef ADM_HAVE_AVX2_TU
const Kernels* avx2_kernels() { return nullptr; }
#endif

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const Kernels& select() {
  if (const char* env = std::getenv("VERIFY_SIMD"); env && std::string_view(env) == "scalar") {
    return scalar_kernels();
  }
  if (const Kernels* k = avx2_kernels(); k && cpu_has_avx2_fma()) return *k;
  return scalar_kernels();
}

}  // namespace

const Kernels& active() {
  static const Kernels& chosen = select();
  return chosen;
}

}  // namespace adm::simd
