#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strips/discretize.hpp"
#include "strips/linalg/sparse.hpp"

namespace strips {

struct SpectrumResult {
  std::vector<double> eigenvalues;            // ascending
  std::vector<std::vector<double>> eigenvectors;  // M-orthonormal
  std::vector<double> residuals;              // |K v - lambda M v| / |M v|
  int iterations = 0;
  std::string solver;
  bool converged = true;
  std::vector<double> ritz_history;  // smallest Ritz value per iteration
};

enum class EigMethod { automatic, lobpcg, dense };

struct EigOptions {
  double tol = 1e-9;
  std::uint64_t seed = 1;
  EigMethod method = EigMethod::automatic;
  int dense_threshold = 2500;
  bool want_vectors = true;
  int max_iterations = 0;  // 0: 10*sqrt(dimension)
};

// m smallest eigenpairs of K u = lambda M u with diagonal positive M.
// automatic: tridiagonal K -> bisection + inverse iteration; otherwise dense
// cyclic Jacobi below dense_threshold unknowns, LOBPCG above (block m+2,
// diagonal preconditioner, shift-invert Lanczos fallback on stagnation).
SpectrumResult smallest_eigs(const linalg::CsrMatrix& K, const std::vector<double>& mass, int m,
                             const EigOptions& options = {});
SpectrumResult smallest_eigs(const DiscreteForm& form, int m, const EigOptions& options = {});

double rayleigh_quotient(const DiscreteForm& form, const std::vector<double>& u);
double rayleigh_quotient(const linalg::CsrMatrix& K, const std::vector<double>& mass,
                         const std::vector<double>& u);

// Solves (K - z M) u = rhs by preconditioned CG; z must lie below the
// spectrum (an indefinite direction raises SolverError).
std::vector<double> solve_shifted(const DiscreteForm& form, double z,
                                  const std::vector<double>& rhs, double tol,
                                  int max_iterations = 0);

std::string spectrum_json(const SpectrumResult& result);

}  // namespace strips
