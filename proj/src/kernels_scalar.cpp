#include "bifree/kernels.hpp"

#include <cstring>

namespace bifree::kernels {

void matmul_scalar(const double* a, const double* b, double* c, int n) {
  std::memset(c, 0, sizeof(double) * static_cast<size_t>(n) * n);
  // i-k-j order: the inner loop streams both b and c, which -O3
  // auto-vectorizes well enough for the fallback path.
  for (int i = 0; i < n; ++i) {
    const double* ai = a + static_cast<size_t>(i) * n;
    double* ci = c + static_cast<size_t>(i) * n;
    for (int k = 0; k < n; ++k) {
      const double aik = ai[k];
      const double* bk = b + static_cast<size_t>(k) * n;
      for (int j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
}

double trace_product_scalar(const double* a, const double* b, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* ai = a + static_cast<size_t>(i) * n;
    const double* bi = b + i;  // column i of b, stride n
    for (int k = 0; k < n; ++k) acc += ai[k] * bi[static_cast<size_t>(k) * n];
  }
  return acc;
}

void scale_rows_scalar(double* a, const double* d, int n) {
  for (int i = 0; i < n; ++i) {
    const double di = d[i];
    double* ai = a + static_cast<size_t>(i) * n;
    for (int j = 0; j < n; ++j) ai[j] *= di;
  }
}

void scale_cols_scalar(double* a, const double* d, int n) {
  for (int i = 0; i < n; ++i) {
    double* ai = a + static_cast<size_t>(i) * n;
    for (int j = 0; j < n; ++j) ai[j] *= d[j];
  }
}

}  // namespace bifree::kernels
