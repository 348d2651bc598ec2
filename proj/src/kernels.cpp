#include "bifree/kernels.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>

#include "bifree/errors.hpp"

namespace bifree::kernels {

const char* name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "?";
}

Backend backend_from_string(const std::string& s) {
  if (s == "scalar") return Backend::scalar;
  if (s == "avx2") return Backend::avx2;
  if (s == "neon") return Backend::neon;
  throw ArgumentError("unknown kernel backend '" + s +
                      "' (expected scalar, avx2 or neon)");
}

bool supported(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(__i386__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if defined(__ARM_NEON) || defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend best_supported() {
  if (supported(Backend::avx2)) return Backend::avx2;
  if (supported(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("BIFREE_KERNELS")) {
    try {
      const Backend b = backend_from_string(env);
      if (supported(b)) return b;
      std::fprintf(stderr,
                   "bifree: BIFREE_KERNELS=%s not supported on this CPU, "
                   "using %s\n",
                   env, name(best_supported()));
    } catch (const ArgumentError&) {
      std::fprintf(stderr, "bifree: ignoring invalid BIFREE_KERNELS=%s\n", env);
    }
  }
  return best_supported();
}

std::atomic<Backend>& state() {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

}  // namespace

Backend active_backend() { return state().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!supported(b))
    throw ArgumentError(std::string("kernel backend '") + name(b) +
                        "' is not supported on this CPU");
  state().store(b, std::memory_order_relaxed);
}

void matmul(const double* a, const double* b, double* c, int n) {
  switch (active_backend()) {
#if defined(__x86_64__) || defined(__i386__) || defined(_M_X64)
    case Backend::avx2: matmul_avx2(a, b, c, n); return;
#endif
#if defined(__ARM_NEON) || defined(__aarch64__)
    case Backend::neon: matmul_neon(a, b, c, n); return;
#endif
    default: matmul_scalar(a, b, c, n); return;
  }
}

double trace_product(const double* a, const double* b, int n) {
  switch (active_backend()) {
#if defined(__x86_64__) || defined(__i386__) || defined(_M_X64)
    case Backend::avx2: return trace_product_avx2(a, b, n);
#endif
#if defined(__ARM_NEON) || defined(__aarch64__)
    case Backend::neon: return trace_product_neon(a, b, n);
#endif
    default: return trace_product_scalar(a, b, n);
  }
}

void scale_rows(double* a, const double* d, int n) {
  switch (active_backend()) {
#if defined(__x86_64__) || defined(__i386__) || defined(_M_X64)
    case Backend::avx2: scale_rows_avx2(a, d, n); return;
#endif
#if defined(__ARM_NEON) || defined(__aarch64__)
    case Backend::neon: scale_rows_neon(a, d, n); return;
#endif
    default: scale_rows_scalar(a, d, n); return;
  }
}

void scale_cols(double* a, const double* d, int n) {
  switch (active_backend()) {
#if defined(__x86_64__) || defined(__i386__) || defined(_M_X64)
    case Backend::avx2: scale_cols_avx2(a, d, n); return;
#endif
#if defined(__ARM_NEON) || defined(__aarch64__)
    case Backend::neon: scale_cols_neon(a, d, n); return;
#endif
    default: scale_cols_scalar(a, d, n); return;
  }
}

}  // namespace bifree::kernels
