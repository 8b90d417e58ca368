#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "strips/linalg/dense.hpp"
#include "strips/linalg/sparse.hpp"

using namespace strips::linalg;

TEST_CASE("csr from triplets sums duplicates and multiplies correctly") {
  std::vector<Triplet> trips = {{0, 0, 1.0}, {0, 0, 2.0}, {0, 2, -1.0}, {1, 1, 4.0}, {2, 0, 5.0}};
  const auto A = CsrMatrix::from_triplets(3, 3, trips);
  CHECK(A.at(0, 0) == 3.0);
  CHECK(A.at(0, 2) == -1.0);
  CHECK(A.at(2, 2) == 0.0);
  std::vector<double> x = {1.0, 2.0, 3.0}, y;
  A.mul(x, y);
  CHECK(y[0] == doctest::Approx(0.0));
  CHECK(y[1] == doctest::Approx(8.0));
  CHECK(y[2] == doctest::Approx(5.0));
}

TEST_CASE("matrix market symmetric round trip") {
  std::vector<Triplet> trips;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  const int n = 17;
  for (int i = 0; i < n; ++i) {
    trips.push_back({i, i, uni(rng) + 4.0});
    if (i + 1 < n) {
      const double v = uni(rng);
      trips.push_back({i, i + 1, v});
      trips.push_back({i + 1, i, v});
    }
  }
  const auto A = CsrMatrix::from_triplets(n, n, trips);
  std::stringstream ss;
  A.write_matrix_market(ss);
  const auto B = CsrMatrix::read_matrix_market(ss);
  REQUIRE(B.rows() == n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) CHECK(A.at(i, j) == B.at(i, j));
}

TEST_CASE("jacobi eigensolver on a known 2x2 and a random SPD matrix") {
  DenseMatrix A(2);
  A(0, 0) = 2.0;
  A(0, 1) = A(1, 0) = 1.0;
  A(1, 1) = 2.0;
  std::vector<double> ev;
  DenseMatrix V;
  jacobi_eigh(A, ev, V);
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(3.0));

  const int n = 24;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  DenseMatrix B(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = uni(rng);
      B(i, j) = v;
      B(j, i) = v;
    }
  jacobi_eigh(B, ev, V);
  for (int j = 0; j < n; ++j) {
    // residual |Bv - ev v|
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += B(i, k) * V(k, j);
      worst = std::max(worst, std::abs(s - ev[j] * V(i, j)));
    }
    CHECK(worst < 1e-10);
  }
  for (int j = 1; j < n; ++j) CHECK(ev[j] >= ev[j - 1]);
}

TEST_CASE("generalized dense solve is B-orthonormal") {
  const int n = 9;
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  DenseMatrix A(n), B(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = uni(rng);
      A(i, j) = A(j, i) = v;
    }
    B(i, i) = 1.5 + 0.5 * uni(rng);
  }
  std::vector<double> ev;
  DenseMatrix V;
  eigh_gen(A, B, ev, V);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double g = 0.0;
      for (int i = 0; i < n; ++i) g += V(i, p) * B(i, i) * V(i, q);
      CHECK(g == doctest::Approx(p == q ? 1.0 : 0.0).epsilon(1e-9));
    }
}

TEST_CASE("tridiagonal bisection matches the discrete Laplacian spectrum") {
  // (-1,2,-1)/h^2 on n interior nodes of (0,L): eig_j = (4/h^2) sin^2(j pi h / (2L))
  const int n = 500;
  const double L = 2.0, h = L / (n + 1);
  std::vector<double> d(n, 2.0 / (h * h)), e(n - 1, -1.0 / (h * h));
  const auto evs = tridiag_smallest(d, e, 3);
  for (int j = 1; j <= 3; ++j) {
    const double exact = 4.0 / (h * h) * std::pow(std::sin(j * M_PI * h / (2.0 * L)), 2);
    // bisection accuracy is absolute in the matrix scale 4/h^2
    CHECK(std::abs(evs[j - 1] - exact) < 1e-13 * (4.0 / (h * h)));
  }
  // eigenvector residual
  const auto v = tridiag_eigenvector(d, e, evs[0]);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = d[i] * v[i];
    if (i > 0) s += e[i - 1] * v[i - 1];
    if (i + 1 < n) s += e[i] * v[i + 1];
    worst = std::max(worst, std::abs(s - evs[0] * v[i]));
  }
  CHECK(worst < 1e-8 * (2.0 / (h * h)));
}

TEST_CASE("lu solve inverts a random system") {
  const int n = 12;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  DenseMatrix A(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = uni(rng);
    A(i, i) += 4.0;
  }
  std::vector<double> xref(n);
  for (auto& v : xref) v = uni(rng);
  std::vector<double> b(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b[i] += A(i, j) * xref[j];
  const auto x = lu_solve(A, b);
  for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(xref[i]).epsilon(1e-10));
}
