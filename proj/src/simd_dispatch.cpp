#include "gmt/simd.hpp"

#include <cstdlib>
#include <cstring>

#include "kernels_detail.hpp"

namespace gmt::simd {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const KernelTable& table(Backend b) {
  static const KernelTable scalar{
      detail::sqdist_batch_scalar, detail::min_sqdist_scalar, detail::plane_sqdist_batch_scalar,
      detail::sum_scalar,          detail::max_value_scalar,  detail::moments_scalar,
  };
  static const KernelTable avx2{
      detail::sqdist_batch_avx2, detail::min_sqdist_avx2, detail::plane_sqdist_batch_avx2,
      detail::sum_avx2,          detail::max_value_avx2,  detail::moments_avx2,
  };
  return b == Backend::avx2 ? avx2 : scalar;
}

Backend active_backend() {
  static const Backend chosen = [] {
    const char* env = std::getenv("CORONA_TST_SIMD");
    if (env) {
      if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
      if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::avx2;
      if (std::strcmp(env, "avx2") == 0) return Backend::scalar;
    }
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
  }();
  return chosen;
}

const KernelTable& kernels() { return table(active_backend()); }

std::string backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

}  // namespace gmt::simd
