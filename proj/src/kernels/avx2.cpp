// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma on x86-64 only; the
// dispatcher never selects this table unless CPUID reports both features.

#include "smc/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cstring>
#include <vector>

namespace smc::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(std::size_t n, const double* x, const double* y) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_avx2(std::size_t n, double a, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale_avx2(std::size_t n, double a, double* x) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

double sum_sq_avx2(std::size_t n, const double* x) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d v0 = _mm256_loadu_pd(x + i);
    __m256d v1 = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double sq_diff_sum_avx2(std::size_t n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    r += d * d;
  }
  return r;
}

void masked_assign_avx2(std::size_t n, double* dst, const double* src,
                        const std::uint8_t* mask) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // widen 4 mask bytes to a lane mask: nonzero byte -> all-ones lane
    int mword;
    std::memcpy(&mword, mask + i, 4);
    __m128i mb = _mm_cvtsi32_si128(mword);
    __m256i lanes = _mm256_cvtepu8_epi64(mb);
    __m256i m = _mm256_cmpgt_epi64(lanes, _mm256_setzero_si256());
    __m256d blended = _mm256_blendv_pd(_mm256_loadu_pd(dst + i),
                                       _mm256_loadu_pd(src + i),
                                       _mm256_castsi256_pd(m));
    _mm256_storeu_pd(dst + i, blended);
  }
  for (; i < n; ++i)
    if (mask[i]) dst[i] = src[i];
}

double masked_sq_diff_sum_avx2(std::size_t n, const double* x, const double* y,
                               const std::uint8_t* mask) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    int mword;
    std::memcpy(&mword, mask + i, 4);
    __m128i mb = _mm_cvtsi32_si128(mword);
    __m256i lanes = _mm256_cvtepu8_epi64(mb);
    __m256d m = _mm256_castsi256_pd(
        _mm256_cmpgt_epi64(lanes, _mm256_setzero_si256()));
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    d = _mm256_and_pd(d, m);
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) {
    if (mask[i]) {
      const double d = x[i] - y[i];
      r += d * d;
    }
  }
  return r;
}

// Blocked, packed GEMM with a 4x8 FMA microkernel.
constexpr std::size_t MC = 128;
constexpr std::size_t KC = 256;
constexpr std::size_t NC = 2048;
constexpr std::size_t MR = 4;
constexpr std::size_t NR = 8;

// A panel: mc x kc packed into MR-row slivers, column-major within sliver.
void pack_a(std::size_t mc, std::size_t kc, const double* a, std::size_t lda,
            double* buf) {
  for (std::size_t i0 = 0; i0 < mc; i0 += MR) {
    const std::size_t mr = std::min(MR, mc - i0);
    for (std::size_t p = 0; p < kc; ++p) {
      for (std::size_t i = 0; i < mr; ++i) *buf++ = a[(i0 + i) * lda + p];
      for (std::size_t i = mr; i < MR; ++i) *buf++ = 0.0;
    }
  }
}

// B panel: kc x nc packed into NR-column slivers, row-major within sliver.
void pack_b(std::size_t kc, std::size_t nc, const double* b, std::size_t ldb,
            double* buf) {
  for (std::size_t j0 = 0; j0 < nc; j0 += NR) {
    const std::size_t nr = std::min(NR, nc - j0);
    for (std::size_t p = 0; p < kc; ++p) {
      const double* bp = b + p * ldb + j0;
      for (std::size_t j = 0; j < nr; ++j) *buf++ = bp[j];
      for (std::size_t j = nr; j < NR; ++j) *buf++ = 0.0;
    }
  }
}

// C[0:4, 0:8] += packed_a * packed_b
inline void micro_4x8(std::size_t kc, const double* pa, const double* pb,
                      double* c, std::size_t ldc) {
  __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd();
  __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd();
  __m256d c20 = _mm256_setzero_pd(), c21 = _mm256_setzero_pd();
  __m256d c30 = _mm256_setzero_pd(), c31 = _mm256_setzero_pd();
  for (std::size_t p = 0; p < kc; ++p) {
    const __m256d b0 = _mm256_loadu_pd(pb);
    const __m256d b1 = _mm256_loadu_pd(pb + 4);
    __m256d a0 = _mm256_broadcast_sd(pa + 0);
    c00 = _mm256_fmadd_pd(a0, b0, c00);
    c01 = _mm256_fmadd_pd(a0, b1, c01);
    a0 = _mm256_broadcast_sd(pa + 1);
    c10 = _mm256_fmadd_pd(a0, b0, c10);
    c11 = _mm256_fmadd_pd(a0, b1, c11);
    a0 = _mm256_broadcast_sd(pa + 2);
    c20 = _mm256_fmadd_pd(a0, b0, c20);
    c21 = _mm256_fmadd_pd(a0, b1, c21);
    a0 = _mm256_broadcast_sd(pa + 3);
    c30 = _mm256_fmadd_pd(a0, b0, c30);
    c31 = _mm256_fmadd_pd(a0, b1, c31);
    pa += MR;
    pb += NR;
  }
  double* c0 = c;
  _mm256_storeu_pd(c0, _mm256_add_pd(c00, _mm256_loadu_pd(c0)));
  _mm256_storeu_pd(c0 + 4, _mm256_add_pd(c01, _mm256_loadu_pd(c0 + 4)));
  c0 = c + ldc;
  _mm256_storeu_pd(c0, _mm256_add_pd(c10, _mm256_loadu_pd(c0)));
  _mm256_storeu_pd(c0 + 4, _mm256_add_pd(c11, _mm256_loadu_pd(c0 + 4)));
  c0 = c + 2 * ldc;
  _mm256_storeu_pd(c0, _mm256_add_pd(c20, _mm256_loadu_pd(c0)));
  _mm256_storeu_pd(c0 + 4, _mm256_add_pd(c21, _mm256_loadu_pd(c0 + 4)));
  c0 = c + 3 * ldc;
  _mm256_storeu_pd(c0, _mm256_add_pd(c30, _mm256_loadu_pd(c0)));
  _mm256_storeu_pd(c0 + 4, _mm256_add_pd(c31, _mm256_loadu_pd(c0 + 4)));
}

// Edge tile: accumulate through a stack buffer, then copy the live part.
inline void micro_edge(std::size_t kc, std::size_t mr, std::size_t nr,
                       const double* pa, const double* pb, double* c,
                       std::size_t ldc) {
  double tmp[MR * NR];
  std::memset(tmp, 0, sizeof(tmp));
  micro_4x8(kc, pa, pb, tmp, NR);
  for (std::size_t i = 0; i < mr; ++i)
    for (std::size_t j = 0; j < nr; ++j) c[i * ldc + j] += tmp[i * NR + j];
}

void gemm_nn_acc_avx2(std::size_t m, std::size_t n, std::size_t k,
                      const double* a, std::size_t lda, const double* b,
                      std::size_t ldb, double* c, std::size_t ldc) {
  if (m == 0 || n == 0 || k == 0) return;
  thread_local std::vector<double> pa_buf, pb_buf;
  pa_buf.resize(MC * KC);
  pb_buf.resize(KC * NC);
  for (std::size_t jc = 0; jc < n; jc += NC) {
    const std::size_t nc = std::min(NC, n - jc);
    for (std::size_t pc = 0; pc < k; pc += KC) {
      const std::size_t kc = std::min(KC, k - pc);
      pack_b(kc, nc, b + pc * ldb + jc, ldb, pb_buf.data());
      for (std::size_t ic = 0; ic < m; ic += MC) {
        const std::size_t mc = std::min(MC, m - ic);
        pack_a(mc, kc, a + ic * lda + pc, lda, pa_buf.data());
        for (std::size_t jr = 0; jr < nc; jr += NR) {
          const std::size_t nr = std::min(NR, nc - jr);
          const double* pb = pb_buf.data() + (jr / NR) * kc * NR;
          for (std::size_t ir = 0; ir < mc; ir += MR) {
            const std::size_t mr = std::min(MR, mc - ir);
            const double* pa = pa_buf.data() + (ir / MR) * kc * MR;
            double* ct = c + (ic + ir) * ldc + jc + jr;
            if (mr == MR && nr == NR) {
              micro_4x8(kc, pa, pb, ct, ldc);
            } else {
              micro_edge(kc, mr, nr, pa, pb, ct, ldc);
            }
          }
        }
      }
    }
  }
}

const Ops avx2_ops = {
    dot_avx2,         axpy_avx2,
    scale_avx2,       sum_sq_avx2,
    sq_diff_sum_avx2, masked_assign_avx2,
    masked_sq_diff_sum_avx2, gemm_nn_acc_avx2,
    "avx2",
};

}  // namespace

const Ops* avx2_ops_or_null() { return &avx2_ops; }

}  // namespace smc::kernels

#else

namespace smc::kernels {
const Ops* avx2_ops_or_null() { return nullptr; }
}  // namespace smc::kernels

#endif
