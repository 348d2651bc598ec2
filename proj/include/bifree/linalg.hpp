#pragma once

#include <vector>

#include "bifree/errors.hpp"

namespace bifree {

/// Dense square matrix, row-major.
struct Matrix {
  int n = 0;
  std::vector<double> a;

  Matrix() = default;
  explicit Matrix(int n_) : n(n_), a(static_cast<size_t>(n_) * n_, 0.0) {}

  static Matrix identity(int n);

  double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
  double* data() { return a.data(); }
  const double* data() const { return a.data(); }
};

/// Naive O(n^3) product; fine for the small matrices this header serves.
/// The Monte Carlo path uses bifree::kernels instead.
Matrix mul(const Matrix& x, const Matrix& y);

struct SymmetricEigen {
  std::vector<double> values;  // eigenvalues, one per column of vectors
  Matrix vectors;              // columns are orthonormal eigenvectors
};

/// Cyclic Jacobi diagonalization of a symmetric matrix:
/// a = vectors * diag(values) * vectors^T. Symmetry is the caller's
/// contract; only the upper triangle drives the rotations.
SymmetricEigen jacobi_eigen(const Matrix& a, int max_sweeps = 64);

/// Symmetric PSD square root L = V diag(sqrt(lambda)) V^T, so L * L^T =
/// L * L = a. Eigenvalues in [eig_floor, 0) are clamped to zero; anything
/// below eig_floor raises NotPsdError.
Matrix symmetric_sqrt(const Matrix& a, double eig_floor = -1e-12);

}  // namespace bifree
