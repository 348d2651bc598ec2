#if defined(__ARM_NEON) || defined(__aarch64__)

#include <arm_neon.h>

#include <cstring>

#include "bifree/kernels.hpp"

namespace bifree::kernels {

void matmul_neon(const double* a, const double* b, double* c, int n) {
  std::memset(c, 0, sizeof(double) * static_cast<size_t>(n) * n);
  const int i2 = n - n % 2;
  const int j4 = n - n % 4;
  for (int i = 0; i < i2; i += 2) {
    const double* a0 = a + static_cast<size_t>(i) * n;
    const double* a1 = a0 + n;
    double* c0 = c + static_cast<size_t>(i) * n;
    double* c1 = c0 + n;
    for (int j = 0; j < j4; j += 4) {
      float64x2_t s00 = vdupq_n_f64(0.0), s01 = vdupq_n_f64(0.0);
      float64x2_t s10 = vdupq_n_f64(0.0), s11 = vdupq_n_f64(0.0);
      const double* bk = b + j;
      for (int k = 0; k < n; ++k, bk += n) {
        const float64x2_t b0 = vld1q_f64(bk);
        const float64x2_t b1 = vld1q_f64(bk + 2);
        const float64x2_t a0k = vdupq_n_f64(a0[k]);
        const float64x2_t a1k = vdupq_n_f64(a1[k]);
        s00 = vfmaq_f64(s00, a0k, b0);
        s01 = vfmaq_f64(s01, a0k, b1);
        s10 = vfmaq_f64(s10, a1k, b0);
        s11 = vfmaq_f64(s11, a1k, b1);
      }
      vst1q_f64(c0 + j, s00);
      vst1q_f64(c0 + j + 2, s01);
      vst1q_f64(c1 + j, s10);
      vst1q_f64(c1 + j + 2, s11);
    }
    for (int j = j4; j < n; ++j) {
      double t0 = 0.0, t1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double bkj = b[static_cast<size_t>(k) * n + j];
        t0 += a0[k] * bkj;
        t1 += a1[k] * bkj;
      }
      c0[j] = t0;
      c1[j] = t1;
    }
  }
  for (int i = i2; i < n; ++i) {
    const double* ai = a + static_cast<size_t>(i) * n;
    double* ci = c + static_cast<size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      double t = 0.0;
      for (int k = 0; k < n; ++k) t += ai[k] * b[static_cast<size_t>(k) * n + j];
      ci[j] = t;
    }
  }
}

double trace_product_neon(const double* a, const double* b, int n) {
  const int k2 = n - n % 2;
  float64x2_t acc = vdupq_n_f64(0.0);
  double tail = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* ai = a + static_cast<size_t>(i) * n;
    const double* bi = b + i;
    for (int k = 0; k < k2; k += 2) {
      float64x2_t bv = vdupq_n_f64(0.0);
      bv = vld1q_lane_f64(bi + static_cast<size_t>(k) * n, bv, 0);
      bv = vld1q_lane_f64(bi + static_cast<size_t>(k + 1) * n, bv, 1);
      acc = vfmaq_f64(acc, vld1q_f64(ai + k), bv);
    }
    for (int k = k2; k < n; ++k) tail += ai[k] * bi[static_cast<size_t>(k) * n];
  }
  return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1) + tail;
}

void scale_rows_neon(double* a, const double* d, int n) {
  const int j2 = n - n % 2;
  for (int i = 0; i < n; ++i) {
    double* ai = a + static_cast<size_t>(i) * n;
    const float64x2_t dv = vdupq_n_f64(d[i]);
    for (int j = 0; j < j2; j += 2)
      vst1q_f64(ai + j, vmulq_f64(vld1q_f64(ai + j), dv));
    for (int j = j2; j < n; ++j) ai[j] *= d[i];
  }
}

void scale_cols_neon(double* a, const double* d, int n) {
  const int j2 = n - n % 2;
  for (int i = 0; i < n; ++i) {
    double* ai = a + static_cast<size_t>(i) * n;
    for (int j = 0; j < j2; j += 2)
      vst1q_f64(ai + j, vmulq_f64(vld1q_f64(ai + j), vld1q_f64(d + j)));
    for (int j = j2; j < n; ++j) ai[j] *= d[j];
  }
}

}  // namespace bifree::kernels

#endif
