#include "smc/kernels.hpp"

namespace smc::kernels {
namespace {

double dot_scalar(std::size_t n, const double* x, const double* y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(std::size_t n, double a, double* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double sum_sq_scalar(std::size_t n, const double* x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double sq_diff_sum_scalar(std::size_t n, const double* x, const double* y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

void masked_assign_scalar(std::size_t n, double* dst, const double* src,
                          const std::uint8_t* mask) {
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i]) dst[i] = src[i];
  }
}

double masked_sq_diff_sum_scalar(std::size_t n, const double* x,
                                 const double* y, const std::uint8_t* mask) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i]) {
      const double d = x[i] - y[i];
      acc += d * d;
    }
  }
  return acc;
}

// Plain ikj loop; the AVX2 variant carries the blocked/packed version.
void gemm_nn_acc_scalar(std::size_t m, std::size_t n, std::size_t k,
                        const double* a, std::size_t lda, const double* b,
                        std::size_t ldb, double* c, std::size_t ldc) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * lda;
    double* ci = c + i * ldc;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = ai[p];
      if (aip == 0.0) continue;
      const double* bp = b + p * ldb;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
}

}  // namespace

const Ops scalar_ops = {
    dot_scalar,         axpy_scalar,
    scale_scalar,       sum_sq_scalar,
    sq_diff_sum_scalar, masked_assign_scalar,
    masked_sq_diff_sum_scalar, gemm_nn_acc_scalar,
    "scalar",
};

}  // namespace smc::kernels
