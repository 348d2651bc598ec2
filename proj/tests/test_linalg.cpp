// Dense symmetric eigendecomposition and the PSD square root. Expected
// values come from hand-solved small systems; larger cases are verified by
// reconstruction against an in-test naive multiply.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bifree/linalg.hpp"
#include "doctest.h"

using namespace bifree;

namespace {

struct MiniRng {
  uint64_t s;
  explicit MiniRng(uint64_t seed) : s(seed) {}
  uint64_t next() {
    s += 0x9e3779b97f4a7c15ULL;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
};

Matrix naive_mul(const Matrix& x, const Matrix& y) {
  Matrix r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const double xv = x.at(i, k);
      for (int j = 0; j < x.n; ++j) r.at(i, j) += xv * y.at(k, j);
    }
  return r;
}

Matrix random_symmetric(int n, MiniRng& rng) {
  Matrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = 2.0 * rng.uniform() - 1.0;
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  return m;
}

double max_abs_diff(const Matrix& x, const Matrix& y) {
  double m = 0.0;
  for (size_t i = 0; i < x.a.size(); ++i)
    m = std::max(m, std::abs(x.a[i] - y.a[i]));
  return m;
}

}  // namespace

TEST_CASE("matrix basics") {
  Matrix id3 = Matrix::identity(3);
  CHECK(id3.at(0, 0) == 1.0);
  CHECK(id3.at(0, 1) == 0.0);
  Matrix id = Matrix::identity(2);
  Matrix m(2);
  m.at(0, 0) = 1;
  m.at(0, 1) = 2;
  m.at(1, 0) = 3;
  m.at(1, 1) = 4;
  // [[1,2],[3,4]]^2 = [[7,10],[15,22]]
  Matrix sq = mul(m, m);
  CHECK(sq.at(0, 0) == doctest::Approx(7.0));
  CHECK(sq.at(0, 1) == doctest::Approx(10.0));
  CHECK(sq.at(1, 0) == doctest::Approx(15.0));
  CHECK(sq.at(1, 1) == doctest::Approx(22.0));
  CHECK(max_abs_diff(mul(m, id), m) == doctest::Approx(0.0));
}

TEST_CASE("jacobi_eigen solves the hand-checked 2x2 case") {
  // [[2,1],[1,2]] has eigenvalues 1 and 3 with eigenvectors
  // (1,-1)/sqrt(2) and (1,1)/sqrt(2).
  Matrix m(2);
  m.at(0, 0) = 2;
  m.at(0, 1) = 1;
  m.at(1, 0) = 1;
  m.at(1, 1) = 2;
  SymmetricEigen eig = jacobi_eigen(m);
  std::vector<double> vals = eig.values;
  std::sort(vals.begin(), vals.end());
  CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(vals[1] == doctest::Approx(3.0).epsilon(1e-12));
  for (size_t c = 0; c < 2; ++c) {
    // Each column satisfies m v = lambda v.
    const double v0 = eig.vectors.at(0, static_cast<int>(c));
    const double v1 = eig.vectors.at(1, static_cast<int>(c));
    const double lam = eig.values[c];
    CHECK(2 * v0 + v1 == doctest::Approx(lam * v0).epsilon(1e-12));
    CHECK(v0 + 2 * v1 == doctest::Approx(lam * v1).epsilon(1e-12));
  }
}

TEST_CASE("jacobi_eigen reconstructs random symmetric matrices") {
  MiniRng rng(5);
  for (int n : {1, 2, 3, 5, 8, 13}) {
    Matrix m = random_symmetric(n, rng);
    SymmetricEigen eig = jacobi_eigen(m);

    // V diag(lambda) V^T == m
    Matrix vl(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) vl.at(i, j) = eig.vectors.at(i, j) * eig.values[static_cast<size_t>(j)];
    Matrix vt(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) vt.at(i, j) = eig.vectors.at(j, i);
    CHECK(max_abs_diff(naive_mul(vl, vt), m) < 1e-10);

    // V^T V == I
    Matrix gram = naive_mul(vt, eig.vectors);
    Matrix id = Matrix::identity(n);
    CHECK(max_abs_diff(gram, id) < 1e-12);
  }
}

TEST_CASE("symmetric_sqrt: exact small cases") {
  Matrix one(1);
  one.at(0, 0) = 4.0;
  Matrix r = symmetric_sqrt(one);
  CHECK(r.at(0, 0) == doctest::Approx(2.0).epsilon(1e-15));

  Matrix id = Matrix::identity(3);
  CHECK(max_abs_diff(symmetric_sqrt(id), id) < 1e-14);
}

TEST_CASE("symmetric_sqrt squares back to the input") {
  MiniRng rng(17);
  for (int n : {1, 2, 3, 5, 8}) {
    // Build a PSD matrix as A A^T.
    Matrix a(n);
    for (auto& x : a.a) x = 2.0 * rng.uniform() - 1.0;
    Matrix at(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) at.at(i, j) = a.at(j, i);
    Matrix psd = naive_mul(a, at);

    Matrix root = symmetric_sqrt(psd);
    CHECK(max_abs_diff(naive_mul(root, root), psd) < 1e-10);
    // The root is itself symmetric.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(root.at(i, j) == doctest::Approx(root.at(j, i)).epsilon(1e-12));
  }
}

TEST_CASE("symmetric_sqrt rejects indefinite input and clamps noise") {
  Matrix bad(2);
  bad.at(0, 0) = 1;
  bad.at(0, 1) = 2;
  bad.at(1, 0) = 2;
  bad.at(1, 1) = 1;  // eigenvalues 3 and -1
  CHECK_THROWS_AS((void)symmetric_sqrt(bad), NotPsdError);

  // Rank-one PSD matrix: the tiny negative eigenvalue from rounding is
  // clamped rather than rejected.
  Matrix rank1(2);
  rank1.at(0, 0) = 1;
  rank1.at(0, 1) = 1;
  rank1.at(1, 0) = 1;
  rank1.at(1, 1) = 1;
  Matrix root = symmetric_sqrt(rank1);
  CHECK(max_abs_diff(naive_mul(root, root), rank1) < 1e-12);
}
