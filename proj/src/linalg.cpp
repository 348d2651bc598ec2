#include "bifree/linalg.hpp"

#include <cmath>
#include <string>

namespace bifree {

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

Matrix mul(const Matrix& x, const Matrix& y) {
  if (x.n != y.n) throw ArgumentError("mul: size mismatch");
  Matrix z(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const double xik = x.at(i, k);
      if (xik == 0.0) continue;
      for (int j = 0; j < x.n; ++j) z.at(i, j) += xik * y.at(k, j);
    }
  return z;
}

SymmetricEigen jacobi_eigen(const Matrix& a_in, int max_sweeps) {
  const int n = a_in.n;
  Matrix a = a_in;
  Matrix v = Matrix::identity(n);

  auto off_sq = [&] {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += a.at(p, q) * a.at(p, q);
    return s;
  };
  double frob_sq = 0.0;
  for (double x : a.a) frob_sq += x * x;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    // Relative threshold keeps the iteration exactly scale-covariant:
    // scaling a by a power of two scales both sides of the test equally.
    if (off_sq() <= 1e-30 * frob_sq) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (apq == 0.0) continue;
        const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        a.at(p, p) -= t * apq;
        a.at(q, q) += t * apq;
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a.at(i, p), aiq = a.at(i, q);
          a.at(i, p) = c * aip - s * aiq;
          a.at(p, i) = a.at(i, p);
          a.at(i, q) = s * aip + c * aiq;
          a.at(q, i) = a.at(i, q);
        }
        for (int i = 0; i < n; ++i) {
          const double vip = v.at(i, p), viq = v.at(i, q);
          v.at(i, p) = c * vip - s * viq;
          v.at(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  SymmetricEigen out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = a.at(i, i);
  out.vectors = std::move(v);
  return out;
}

Matrix symmetric_sqrt(const Matrix& a, double eig_floor) {
  auto eig = jacobi_eigen(a);
  const int n = a.n;
  std::vector<double> root(n);
  for (int i = 0; i < n; ++i) {
    double lam = eig.values[i];
    if (lam < eig_floor)
      throw NotPsdError("symmetric_sqrt: eigenvalue " + std::to_string(lam) +
                        " below floor " + std::to_string(eig_floor));
    if (lam < 0.0) lam = 0.0;
    root[i] = std::sqrt(lam);
  }
  Matrix l(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += eig.vectors.at(i, k) * root[k] * eig.vectors.at(j, k);
      l.at(i, j) = s;
      l.at(j, i) = s;
    }
  return l;
}

}  // namespace bifree
