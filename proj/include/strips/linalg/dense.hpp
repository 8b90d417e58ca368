#pragma once

#include <vector>

namespace strips::linalg {

// Row-major square dense matrix, just enough for the small Rayleigh-Ritz
// systems and the sub-2500-unknown direct eigensolves.
struct DenseMatrix {
  int n = 0;
  std::vector<double> a;  // n*n row-major

  DenseMatrix() = default;
  explicit DenseMatrix(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

// Cyclic Jacobi for symmetric A. Eigenvalues ascending; eigenvectors are the
// columns of V (orthonormal).
void jacobi_eigh(const DenseMatrix& A, std::vector<double>& evals, DenseMatrix& V,
                 int max_sweeps = 40);

// Generalized symmetric A x = lambda B x with B SPD: Cholesky reduction, then
// Jacobi. Eigenvectors are B-orthonormal columns.
void eigh_gen(const DenseMatrix& A, const DenseMatrix& B, std::vector<double>& evals,
              DenseMatrix& V);

// In-place Cholesky B = L L^T (lower). Returns false if a pivot fails.
bool cholesky(DenseMatrix& B);
// Solve L y = b in place (lower triangular).
void solve_lower(const DenseMatrix& L, std::vector<double>& b);
// Solve L^T y = b in place.
void solve_lower_t(const DenseMatrix& L, std::vector<double>& b);

// LU-based dense solve (partial pivoting), for coarse-mesh verification.
std::vector<double> lu_solve(DenseMatrix A, std::vector<double> b);

// Symmetric tridiagonal tools. d: diagonal (n), e: off-diagonal (n-1).
// Number of eigenvalues strictly below x (Sturm count).
int tridiag_count_below(const std::vector<double>& d, const std::vector<double>& e, double x);
// m smallest eigenvalues by bisection.
std::vector<double> tridiag_smallest(const std::vector<double>& d, const std::vector<double>& e,
                                     int m);
// Eigenvector for an isolated eigenvalue by inverse iteration.
std::vector<double> tridiag_eigenvector(const std::vector<double>& d, const std::vector<double>& e,
                                        double lambda);

}  // namespace strips::linalg
