#ifndef SMC_KERNELS_HPP
#define SMC_KERNELS_HPP

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops used by the dense matrix layer. Every kernel has
// a scalar reference implementation and, on x86-64, an AVX2+FMA variant.
// The active variant is chosen once at startup from CPUID; set SMC_SIMD=scalar
// (or avx2) in the environment to force a path.

namespace smc::kernels {

struct Ops {
  // sum_i x[i] * y[i]
  double (*dot)(std::size_t n, const double* x, const double* y);
  // y[i] += a * x[i]
  void (*axpy)(std::size_t n, double a, const double* x, double* y);
  // x[i] *= a
  void (*scale)(std::size_t n, double a, double* x);
  // sum_i x[i]^2
  double (*sum_sq)(std::size_t n, const double* x);
  // sum_i (x[i] - y[i])^2
  double (*sq_diff_sum)(std::size_t n, const double* x, const double* y);
  // dst[i] = src[i] where mask[i] != 0
  void (*masked_assign)(std::size_t n, double* dst, const double* src,
                        const std::uint8_t* mask);
  // sum over masked i of (x[i] - y[i])^2
  double (*masked_sq_diff_sum)(std::size_t n, const double* x, const double* y,
                               const std::uint8_t* mask);
  // C (m x n, row-major, leading dim ldc) += A (m x k, lda) * B (k x n, ldb)
  void (*gemm_nn_acc)(std::size_t m, std::size_t n, std::size_t k,
                      const double* a, std::size_t lda, const double* b,
                      std::size_t ldb, double* c, std::size_t ldc);
  const char* name;
};

// Reference and vectorized variants; avx2 is null on non-x86 builds.
extern const Ops scalar_ops;
const Ops* avx2_ops_or_null();

// The runtime-selected table.
const Ops& active();

inline double dot(std::size_t n, const double* x, const double* y) {
  return active().dot(n, x, y);
}
inline void axpy(std::size_t n, double a, const double* x, double* y) {
  active().axpy(n, a, x, y);
}
inline void scale(std::size_t n, double a, double* x) {
  active().scale(n, a, x);
}
inline double sum_sq(std::size_t n, const double* x) {
  return active().sum_sq(n, x);
}
inline double sq_diff_sum(std::size_t n, const double* x, const double* y) {
  return active().sq_diff_sum(n, x, y);
}
inline void masked_assign(std::size_t n, double* dst, const double* src,
                          const std::uint8_t* mask) {
  active().masked_assign(n, dst, src, mask);
}
inline double masked_sq_diff_sum(std::size_t n, const double* x,
                                 const double* y, const std::uint8_t* mask) {
  return active().masked_sq_diff_sum(n, x, y, mask);
}
inline void gemm_nn_acc(std::size_t m, std::size_t n, std::size_t k,
                        const double* a, std::size_t lda, const double* b,
                        std::size_t ldb, double* c, std::size_t ldc) {
  active().gemm_nn_acc(m, n, k, a, lda, b, ldb, c, ldc);
}

}  // namespace smc::kernels

#endif  // SMC_KERNELS_HPP
