#if defined(__x86_64__) || defined(__i386__) || defined(_M_X64)

#include <immintrin.h>

#include <cstring>

#include "bifree/kernels.hpp"

// Everything here is compiled for the baseline ISA but carries a per-
// function target attribute, so the binary still loads on CPUs without
// AVX2; the dispatcher guarantees these are only ever called after a
// positive __builtin_cpu_supports probe.

namespace bifree::kernels {

__attribute__((target("avx2,fma"))) void matmul_avx2(const double* a,
                                                     const double* b,
                                                     double* c, int n) {
  std::memset(c, 0, sizeof(double) * static_cast<size_t>(n) * n);
  const int i4 = n - n % 4;
  const int j8 = n - n % 8;
  for (int i = 0; i < i4; i += 4) {
    const double* a0 = a + static_cast<size_t>(i) * n;
    const double* a1 = a0 + n;
    const double* a2 = a1 + n;
    const double* a3 = a2 + n;
    double* c0 = c + static_cast<size_t>(i) * n;
    double* c1 = c0 + n;
    double* c2 = c1 + n;
    double* c3 = c2 + n;
    for (int j = 0; j < j8; j += 8) {
      __m256d s00 = _mm256_setzero_pd(), s01 = _mm256_setzero_pd();
      __m256d s10 = _mm256_setzero_pd(), s11 = _mm256_setzero_pd();
      __m256d s20 = _mm256_setzero_pd(), s21 = _mm256_setzero_pd();
      __m256d s30 = _mm256_setzero_pd(), s31 = _mm256_setzero_pd();
      const double* bk = b + j;
      for (int k = 0; k < n; ++k, bk += n) {
        const __m256d b0 = _mm256_loadu_pd(bk);
        const __m256d b1 = _mm256_loadu_pd(bk + 4);
        __m256d av = _mm256_set1_pd(a0[k]);
        s00 = _mm256_fmadd_pd(av, b0, s00);
        s01 = _mm256_fmadd_pd(av, b1, s01);
        av = _mm256_set1_pd(a1[k]);
        s10 = _mm256_fmadd_pd(av, b0, s10);
        s11 = _mm256_fmadd_pd(av, b1, s11);
        av = _mm256_set1_pd(a2[k]);
        s20 = _mm256_fmadd_pd(av, b0, s20);
        s21 = _mm256_fmadd_pd(av, b1, s21);
        av = _mm256_set1_pd(a3[k]);
        s30 = _mm256_fmadd_pd(av, b0, s30);
        s31 = _mm256_fmadd_pd(av, b1, s31);
      }
      _mm256_storeu_pd(c0 + j, s00);
      _mm256_storeu_pd(c0 + j + 4, s01);
      _mm256_storeu_pd(c1 + j, s10);
      _mm256_storeu_pd(c1 + j + 4, s11);
      _mm256_storeu_pd(c2 + j, s20);
      _mm256_storeu_pd(c2 + j + 4, s21);
      _mm256_storeu_pd(c3 + j, s30);
      _mm256_storeu_pd(c3 + j + 4, s31);
    }
    for (int j = j8; j < n; ++j) {
      double t0 = 0.0, t1 = 0.0, t2 = 0.0, t3 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double bkj = b[static_cast<size_t>(k) * n + j];
        t0 += a0[k] * bkj;
        t1 += a1[k] * bkj;
        t2 += a2[k] * bkj;
        t3 += a3[k] * bkj;
      }
      c0[j] = t0;
      c1[j] = t1;
      c2[j] = t2;
      c3[j] = t3;
    }
  }
  for (int i = i4; i < n; ++i) {
    const double* ai = a + static_cast<size_t>(i) * n;
    double* ci = c + static_cast<size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      double t = 0.0;
      for (int k = 0; k < n; ++k) t += ai[k] * b[static_cast<size_t>(k) * n + j];
      ci[j] = t;
    }
  }
}

__attribute__((target("avx2,fma"))) double trace_product_avx2(const double* a,
                                                              const double* b,
                                                              int n) {
  const int m4 = n - n % 4;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  double tail = 0.0;
  for (int i = 0; i < m4; i += 4) {
    const double* a0 = a + static_cast<size_t>(i) * n;
    const double* a1 = a0 + n;
    const double* a2 = a1 + n;
    const double* a3 = a2 + n;
    for (int k = 0; k < m4; k += 4) {
      // 4x4 tile: rows i..i+3 x cols k..k+3 of a against the transposed
      // tile rows k..k+3 x cols i..i+3 of b.
      const double* bk = b + static_cast<size_t>(k) * n + i;
      const __m256d r0 = _mm256_loadu_pd(bk);
      const __m256d r1 = _mm256_loadu_pd(bk + n);
      const __m256d r2 = _mm256_loadu_pd(bk + 2 * n);
      const __m256d r3 = _mm256_loadu_pd(bk + 3 * n);
      const __m256d t0 = _mm256_unpacklo_pd(r0, r1);
      const __m256d t1 = _mm256_unpackhi_pd(r0, r1);
      const __m256d t2 = _mm256_unpacklo_pd(r2, r3);
      const __m256d t3 = _mm256_unpackhi_pd(r2, r3);
      const __m256d bt0 = _mm256_permute2f128_pd(t0, t2, 0x20);
      const __m256d bt1 = _mm256_permute2f128_pd(t1, t3, 0x20);
      const __m256d bt2 = _mm256_permute2f128_pd(t0, t2, 0x31);
      const __m256d bt3 = _mm256_permute2f128_pd(t1, t3, 0x31);
      acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a0 + k), bt0, acc0);
      acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a1 + k), bt1, acc1);
      acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a2 + k), bt2, acc2);
      acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a3 + k), bt3, acc3);
    }
    for (int k = m4; k < n; ++k) {
      const double* bk = b + static_cast<size_t>(k) * n + i;
      tail += a0[k] * bk[0] + a1[k] * bk[1] + a2[k] * bk[2] + a3[k] * bk[3];
    }
  }
  for (int i = m4; i < n; ++i) {
    const double* ai = a + static_cast<size_t>(i) * n;
    for (int k = 0; k < n; ++k) tail += ai[k] * b[static_cast<size_t>(k) * n + i];
  }
  const __m256d acc = _mm256_add_pd(_mm256_add_pd(acc0, acc1),
                                    _mm256_add_pd(acc2, acc3));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3] + tail;
}

__attribute__((target("avx2"))) void scale_rows_avx2(double* a, const double* d,
                                                     int n) {
  const int j4 = n - n % 4;
  for (int i = 0; i < n; ++i) {
    double* ai = a + static_cast<size_t>(i) * n;
    const __m256d dv = _mm256_set1_pd(d[i]);
    for (int j = 0; j < j4; j += 4)
      _mm256_storeu_pd(ai + j, _mm256_mul_pd(_mm256_loadu_pd(ai + j), dv));
    for (int j = j4; j < n; ++j) ai[j] *= d[i];
  }
}

__attribute__((target("avx2"))) void scale_cols_avx2(double* a, const double* d,
                                                     int n) {
  const int j4 = n - n % 4;
  for (int i = 0; i < n; ++i) {
    double* ai = a + static_cast<size_t>(i) * n;
    for (int j = 0; j < j4; j += 4)
      _mm256_storeu_pd(ai + j, _mm256_mul_pd(_mm256_loadu_pd(ai + j),
                                             _mm256_loadu_pd(d + j)));
    for (int j = j4; j < n; ++j) ai[j] *= d[j];
  }
}

}  // namespace bifree::kernels

#endif
