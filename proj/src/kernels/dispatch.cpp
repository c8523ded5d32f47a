#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "smc/kernels.hpp"

namespace smc::kernels {
namespace {

const Ops* select() {
  const char* forced = std::getenv("SMC_SIMD");
  if (forced != nullptr) {
    if (std::strcmp(forced, "scalar") == 0) return &scalar_ops;
    if (std::strcmp(forced, "avx2") == 0) {
      const Ops* v = avx2_ops_or_null();
      if (v == nullptr)
        throw std::runtime_error("SMC_SIMD=avx2 requested on a non-x86 build");
      return v;
    }
    throw std::runtime_error("unknown SMC_SIMD value (use scalar or avx2)");
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    const Ops* v = avx2_ops_or_null();
    if (v != nullptr) return v;
  }
#endif
  return &scalar_ops;
}

}  // namespace

const Ops& active() {
  static const Ops* ops = select();
  return *ops;
}

}  // namespace smc::kernels
