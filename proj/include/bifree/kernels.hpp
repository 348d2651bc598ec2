#pragma once

#include <string>

namespace bifree::kernels {

/// Dense kernels behind the Monte Carlo hot loop. A scalar reference
/// implementation always exists; vector variants (AVX2+FMA on x86, NEON
/// on arm64) are selected at runtime when the CPU supports them. Set
/// BIFREE_KERNELS=scalar|avx2|neon to override the choice, or call
/// set_backend(). Variants agree with the reference up to reassociation
/// rounding (see the equivalence tests), not bit-for-bit.
enum class Backend { scalar, avx2, neon };

const char* name(Backend b);
Backend backend_from_string(const std::string& s);
bool supported(Backend b);
Backend best_supported();

Backend active_backend();
void set_backend(Backend b);  // throws ArgumentError if unsupported here

/// c = a * b for row-major n x n matrices; c must not alias a or b.
void matmul(const double* a, const double* b, double* c, int n);

/// trace(a * b) = sum_{i,k} a[i,k] * b[k,i], without forming the product.
double trace_product(const double* a, const double* b, int n);

/// a <- diag(d) * a (row i scaled by d[i]).
void scale_rows(double* a, const double* d, int n);

/// a <- a * diag(d) (column j scaled by d[j]).
void scale_cols(double* a, const double* d, int n);

// Per-backend entry points, kept callable so the equivalence tests can
// pit them against each other directly.
void matmul_scalar(const double* a, const double* b, double* c, int n);
double trace_product_scalar(const double* a, const double* b, int n);
void scale_rows_scalar(double* a, const double* d, int n);
void scale_cols_scalar(double* a, const double* d, int n);

#if defined(__x86_64__) || defined(__i386__) || defined(_M_X64)
void matmul_avx2(const double* a, const double* b, double* c, int n);
double trace_product_avx2(const double* a, const double* b, int n);
void scale_rows_avx2(double* a, const double* d, int n);
void scale_cols_avx2(double* a, const double* d, int n);
#endif

#if defined(__ARM_NEON) || defined(__aarch64__)
void matmul_neon(const double* a, const double* b, double* c, int n);
double trace_product_neon(const double* a, const double* b, int n);
void scale_rows_neon(double* a, const double* d, int n);
void scale_cols_neon(double* a, const double* d, int n);
#endif

}  // namespace bifree::kernels
