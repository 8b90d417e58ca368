#include "strips/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "strips/io.hpp"
#include "strips/linalg/dense.hpp"
#include "strips/simd/kernels.hpp"
#include "strips/util.hpp"

namespace strips {

namespace {

using linalg::CsrMatrix;
using linalg::DenseMatrix;

void check_mass(const std::vector<double>& mass) {
  for (double v : mass)
    if (!(v > 0.0)) throw std::invalid_argument("mass matrix must have positive diagonal");
}

std::vector<double> residual_norms(const CsrMatrix& K, const std::vector<double>& mass,
                                   const std::vector<double>& evals,
                                   const std::vector<std::vector<double>>& evecs) {
  const std::size_t n = mass.size();
  std::vector<double> res(evals.size(), 0.0);
  std::vector<double> kv(n), mv(n);
  for (std::size_t j = 0; j < evals.size(); ++j) {
    K.mul(evecs[j].data(), kv.data());
    simd::dmul(mass.data(), evecs[j].data(), mv.data(), n);
    double rn = 0.0, mn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = kv[i] - evals[j] * mv[i];
      rn += r * r;
      mn += mv[i] * mv[i];
    }
    res[j] = std::sqrt(rn) / std::max(std::sqrt(mn), 1e-300);
  }
  return res;
}

// ---- dense path (cyclic Jacobi on M^{-1/2} K M^{-1/2}) ----------------------

SpectrumResult dense_path(const CsrMatrix& K, const std::vector<double>& mass, int m,
                          const EigOptions& opt) {
  const int n = K.rows();
  DenseMatrix A(n);
  std::vector<double> isq(n);
  for (int i = 0; i < n; ++i) isq[i] = 1.0 / std::sqrt(mass[i]);
  const auto& rowptr = K.rowptr();
  const auto& colidx = K.colidx();
  const auto& vals = K.values();
  for (int r = 0; r < n; ++r)
    for (int p = rowptr[r]; p < rowptr[r + 1]; ++p)
      A(r, colidx[p]) = vals[p] * isq[r] * isq[colidx[p]];

  std::vector<double> evals;
  DenseMatrix V;
  linalg::jacobi_eigh(A, evals, V);

  SpectrumResult out;
  out.solver = "dense-jacobi";
  out.iterations = 1;
  out.eigenvalues.assign(evals.begin(), evals.begin() + std::min(m, n));
  if (opt.want_vectors) {
    out.eigenvectors.resize(out.eigenvalues.size());
    for (std::size_t j = 0; j < out.eigenvalues.size(); ++j) {
      out.eigenvectors[j].resize(n);
      for (int i = 0; i < n; ++i) out.eigenvectors[j][i] = V(i, static_cast<int>(j)) * isq[i];
    }
    out.residuals = residual_norms(K, mass, out.eigenvalues, out.eigenvectors);
  }
  return out;
}

// ---- tridiagonal path (Sturm bisection + inverse iteration) -----------------

SpectrumResult tridiag_path(const CsrMatrix& K, const std::vector<double>& mass, int m,
                            const EigOptions& opt) {
  const int n = K.rows();
  std::vector<double> isq(n);
  for (int i = 0; i < n; ++i) isq[i] = 1.0 / std::sqrt(mass[i]);
  std::vector<double> d(n), e(n > 1 ? n - 1 : 0, 0.0);
  for (int i = 0; i < n; ++i) d[i] = K.at(i, i) * isq[i] * isq[i];
  for (int i = 0; i + 1 < n; ++i) e[i] = K.at(i, i + 1) * isq[i] * isq[i + 1];

  SpectrumResult out;
  out.solver = "tridiag-bisection";
  out.iterations = 1;
  out.eigenvalues = linalg::tridiag_smallest(d, e, m);
  if (opt.want_vectors) {
    out.eigenvectors.resize(out.eigenvalues.size());
    for (std::size_t j = 0; j < out.eigenvalues.size(); ++j) {
      auto y = linalg::tridiag_eigenvector(d, e, out.eigenvalues[j]);
      out.eigenvectors[j].resize(n);
      for (int i = 0; i < n; ++i) out.eigenvectors[j][i] = y[i] * isq[i];
    }
    out.residuals = residual_norms(K, mass, out.eigenvalues, out.eigenvectors);
  }
  return out;
}

// ---- block helpers ----------------------------------------------------------

using Block = std::vector<std::vector<double>>;

double dot_m(const std::vector<double>& x, const std::vector<double>& y,
             const std::vector<double>& mass) {
  return simd::dot3(x.data(), y.data(), mass.data(), mass.size());
}

// M-orthonormalize the columns in place (modified Gram-Schmidt); drops
// near-dependent columns. Returns the surviving count.
int mgs_m(Block& X, const std::vector<double>& mass, double drop_tol = 1e-10) {
  int kept = 0;
  for (std::size_t c = 0; c < X.size(); ++c) {
    auto v = std::move(X[c]);
    const double before = std::sqrt(std::max(dot_m(v, v, mass), 0.0));
    for (int p = 0; p < kept; ++p) {
      const double proj = dot_m(X[p], v, mass);
      simd::axpy(-proj, X[p].data(), v.data(), v.size());
    }
    // second pass for stability
    for (int p = 0; p < kept; ++p) {
      const double proj = dot_m(X[p], v, mass);
      simd::axpy(-proj, X[p].data(), v.data(), v.size());
    }
    const double after = std::sqrt(std::max(dot_m(v, v, mass), 0.0));
    if (after <= drop_tol * std::max(before, 1e-300) || after == 0.0) continue;
    simd::scal(1.0 / after, v.data(), v.size());
    X[kept++] = std::move(v);
  }
  X.resize(kept);
  return kept;
}

// ---- shift-invert Lanczos fallback ------------------------------------------

// CG for (K - z M) x = b with Jacobi preconditioning; returns x.
std::vector<double> cg_shifted(const CsrMatrix& K, const std::vector<double>& mass, double z,
                               const std::vector<double>& b, double tol, int cap) {
  const std::size_t n = mass.size();
  std::vector<double> diag = K.diagonal();
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] -= z * mass[i];
    if (!(diag[i] > 0.0)) diag[i] = 1.0;  // keep preconditioner SPD
  }
  std::vector<double> x(n, 0.0), r = b, zv(n), p(n), ap(n);
  const double bnorm = std::sqrt(simd::nrm2sq(b.data(), n));
  if (bnorm == 0.0) return x;
  for (std::size_t i = 0; i < n; ++i) zv[i] = r[i] / diag[i];
  p = zv;
  double rz = simd::dot(r.data(), zv.data(), n);
  for (int it = 0; it < cap; ++it) {
    K.mul(p.data(), ap.data());
    for (std::size_t i = 0; i < n; ++i) ap[i] -= z * mass[i] * p[i];
    const double pap = simd::dot(p.data(), ap.data(), n);
    if (!(pap > 0.0))
      throw SolverError("shifted system is not positive definite (z inside spectrum?)");
    const double alpha = rz / pap;
    simd::axpy(alpha, p.data(), x.data(), n);
    simd::axpy(-alpha, ap.data(), r.data(), n);
    if (std::sqrt(simd::nrm2sq(r.data(), n)) <= tol * bnorm) return x;
    for (std::size_t i = 0; i < n; ++i) zv[i] = r[i] / diag[i];
    const double rz_new = simd::dot(r.data(), zv.data(), n);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = zv[i] + beta * p[i];
  }
  throw SolverError("cg did not converge within the iteration cap");
}

SpectrumResult lanczos_shift_invert(const CsrMatrix& K, const std::vector<double>& mass, int m,
                                    const EigOptions& opt, double z) {
  const std::size_t n = mass.size();
  const int max_basis = std::min<int>(static_cast<int>(n), std::max(40, 4 * m + 20));

  std::mt19937_64 rng(opt.seed ^ 0x5ca1ab1eULL);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = uni(rng);

  // Lanczos in the M inner product for Op = (K - zM)^{-1} M
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;
  double nrm = std::sqrt(dot_m(v, v, mass));
  simd::scal(1.0 / nrm, v.data(), n);
  basis.push_back(v);

  std::vector<double> mv(n), w(n);
  SpectrumResult out;
  out.solver = "lanczos-shift-invert";

  for (int j = 0; j < max_basis; ++j) {
    simd::dmul(mass.data(), basis[j].data(), mv.data(), n);
    w = cg_shifted(K, mass, z, mv, 1e-12, static_cast<int>(20 * std::sqrt(double(n))) + 200);
    const double a = dot_m(w, basis[j], mass);
    alpha.push_back(a);
    simd::axpy(-a, basis[j].data(), w.data(), n);
    if (j > 0) simd::axpy(-beta[j - 1], basis[j - 1].data(), w.data(), n);
    // full reorthogonalization
    for (const auto& q : basis) {
      const double proj = dot_m(q, w, mass);
      simd::axpy(-proj, q.data(), w.data(), n);
    }
    const double b = std::sqrt(std::max(dot_m(w, w, mass), 0.0));
    out.iterations = j + 1;

    const int k = j + 1;
    if (k >= m + 2 || b <= 1e-14 || k == max_basis) {
      std::vector<double> d(alpha.begin(), alpha.begin() + k);
      std::vector<double> ee(beta.begin(), beta.begin() + std::max(0, k - 1));
      // largest theta of the tridiagonal give the smallest lambda = z + 1/theta
      DenseMatrix T(k);
      for (int i = 0; i < k; ++i) T(i, i) = d[i];
      for (int i = 0; i + 1 < k; ++i) {
        T(i, i + 1) = ee[i];
        T(i + 1, i) = ee[i];
      }
      std::vector<double> th;
      DenseMatrix W;
      linalg::jacobi_eigh(T, th, W);
      const int take = std::min(m, k);
      std::vector<double> evals(take);
      Block vecs(take, std::vector<double>(n, 0.0));
      for (int q = 0; q < take; ++q) {
        const int col = k - 1 - q;  // descending theta
        evals[q] = z + 1.0 / th[col];
        for (int i = 0; i < k; ++i)
          simd::axpy(W(i, col), basis[i].data(), vecs[q].data(), n);
        const double vn = std::sqrt(dot_m(vecs[q], vecs[q], mass));
        simd::scal(1.0 / vn, vecs[q].data(), n);
      }
      std::vector<int> order(take);
      for (int q = 0; q < take; ++q) order[q] = q;
      std::sort(order.begin(), order.end(), [&](int x, int y) { return evals[x] < evals[y]; });
      SpectrumResult res = out;
      for (int q = 0; q < take; ++q) {
        res.eigenvalues.push_back(evals[order[q]]);
        res.eigenvectors.push_back(std::move(vecs[order[q]]));
      }
      res.residuals = residual_norms(K, mass, res.eigenvalues, res.eigenvectors);
      const double worst =
          *std::max_element(res.residuals.begin(), res.residuals.begin() + std::min(m, take));
      if (worst <= opt.tol || b <= 1e-14 || k == max_basis) {
        res.converged = worst <= opt.tol;
        if (!opt.want_vectors) res.eigenvectors.clear();
        return res;
      }
    }
    if (b <= 1e-14) break;
    beta.push_back(b);
    simd::scal(1.0 / b, w.data(), n);
    basis.push_back(w);
  }
  out.converged = false;
  return out;
}

// ---- LOBPCG ------------------------------------------------------------------

SpectrumResult lobpcg_path(const CsrMatrix& K, const std::vector<double>& mass, int m,
                           const EigOptions& opt) {
  const std::size_t n = mass.size();
  const int block = std::min<int>(m + 2, static_cast<int>(n));
  const int cap = opt.max_iterations > 0
                      ? opt.max_iterations
                      : static_cast<int>(10.0 * std::sqrt(static_cast<double>(n))) + 50;

  std::vector<double> prec = K.diagonal();
  for (auto& v : prec) v = v > 0.0 ? 1.0 / v : 1.0;

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Block X(block, std::vector<double>(n));
  for (auto& col : X)
    for (auto& v : col) v = uni(rng);
  mgs_m(X, mass);
  if (static_cast<int>(X.size()) < block)
    throw SolverError("lobpcg: could not build an independent start block");

  Block P;  // previous directions
  SpectrumResult out;
  out.solver = "lobpcg";
  out.converged = false;

  Block KX(block);
  std::vector<double> mv(n);
  auto mulK = [&](const Block& B, Block& KB) {
    KB.resize(B.size());
    for (std::size_t c = 0; c < B.size(); ++c) {
      KB[c].resize(n);
      K.mul(B[c].data(), KB[c].data());
    }
  };

  double best_worst = std::numeric_limits<double>::infinity();
  int stagnant = 0;
  std::vector<double> lambda(block, 0.0);

  for (int iter = 0; iter < cap; ++iter) {
    mulK(X, KX);
    for (int c = 0; c < block; ++c) lambda[c] = simd::dot(X[c].data(), KX[c].data(), n);

    // residuals R = K x - lambda M x
    Block R(block, std::vector<double>(n));
    std::vector<double> rnorm(block);
    for (int c = 0; c < block; ++c) {
      simd::dmul(mass.data(), X[c].data(), mv.data(), n);
      for (std::size_t i = 0; i < n; ++i) R[c][i] = KX[c][i] - lambda[c] * mv[i];
      rnorm[c] = std::sqrt(simd::nrm2sq(R[c].data(), n)) /
                 std::max(std::sqrt(simd::nrm2sq(mv.data(), n)), 1e-300);
    }
    out.ritz_history.push_back(lambda[0]);
    out.iterations = iter + 1;

    const double worst = *std::max_element(rnorm.begin(), rnorm.begin() + std::min(m, block));
    if (worst <= opt.tol) {
      out.converged = true;
      break;
    }
    if (worst < 0.5 * best_worst) {
      best_worst = worst;
      stagnant = 0;
    } else if (++stagnant >= 50) {
      // stagnation: hand over to shift-invert Lanczos below the current
      // Ritz floor
      const double z = lambda[0] - std::max(1.0, std::abs(lambda[0]));
      return lanczos_shift_invert(K, mass, m, opt, z);
    }

    // preconditioned residuals
    Block W(block, std::vector<double>(n));
    for (int c = 0; c < block; ++c) simd::dmul(prec.data(), R[c].data(), W[c].data(), n);

    // trial space S = [X, W, P], M-orthonormalized
    Block S;
    S.reserve(X.size() + W.size() + P.size());
    for (auto& c : X) S.push_back(c);
    for (auto& c : W) S.push_back(std::move(c));
    for (auto& c : P) S.push_back(std::move(c));
    const int kept = mgs_m(S, mass);
    if (kept < block) {
      const double z = lambda[0] - std::max(1.0, std::abs(lambda[0]));
      return lanczos_shift_invert(K, mass, m, opt, z);
    }

    Block KS;
    mulK(S, KS);
    DenseMatrix G(kept);
    for (int i = 0; i < kept; ++i)
      for (int j = i; j < kept; ++j) {
        const double v = simd::dot(S[i].data(), KS[j].data(), n);
        G(i, j) = v;
        G(j, i) = v;
      }
    std::vector<double> th;
    DenseMatrix C;
    linalg::jacobi_eigh(G, th, C);

    // new X from the lowest Ritz vectors; new P from their W/P components
    Block Xn(block, std::vector<double>(n, 0.0));
    Block Pn(block, std::vector<double>(n, 0.0));
    for (int c = 0; c < block; ++c) {
      for (int q = 0; q < kept; ++q) {
        const double w = C(q, c);
        if (w != 0.0) simd::axpy(w, S[q].data(), Xn[c].data(), n);
        if (q >= block && w != 0.0) simd::axpy(w, S[q].data(), Pn[c].data(), n);
      }
    }
    X = std::move(Xn);
    mgs_m(X, mass);
    if (static_cast<int>(X.size()) < block) {
      const double z = lambda[0] - std::max(1.0, std::abs(lambda[0]));
      return lanczos_shift_invert(K, mass, m, opt, z);
    }
    P = std::move(Pn);
    mgs_m(P, mass);
  }

  // final Rayleigh-Ritz values on the converged block
  mulK(X, KX);
  std::vector<std::pair<double, int>> order(block);
  for (int c = 0; c < block; ++c)
    order[c] = {simd::dot(X[c].data(), KX[c].data(), n), c};
  std::sort(order.begin(), order.end());
  const int take = std::min(m, block);
  SpectrumResult res;
  res.solver = out.solver;
  res.iterations = out.iterations;
  res.ritz_history = std::move(out.ritz_history);
  res.converged = out.converged;
  for (int c = 0; c < take; ++c) {
    res.eigenvalues.push_back(order[c].first);
    res.eigenvectors.push_back(std::move(X[order[c].second]));
  }
  res.residuals = residual_norms(K, mass, res.eigenvalues, res.eigenvectors);
  if (!opt.want_vectors) res.eigenvectors.clear();
  return res;
}

}  // namespace

SpectrumResult smallest_eigs(const CsrMatrix& K, const std::vector<double>& mass, int m,
                             const EigOptions& options) {
  if (m < 1) throw std::invalid_argument("smallest_eigs: m must be >= 1");
  if (K.rows() != K.cols() || K.rows() != static_cast<int>(mass.size()))
    throw std::invalid_argument("smallest_eigs: dimension mismatch");
  check_mass(mass);

  EigMethod method = options.method;
  if (method == EigMethod::automatic) {
    if (K.is_tridiagonal())
      return tridiag_path(K, mass, m, options);
    method = K.rows() < options.dense_threshold ? EigMethod::dense : EigMethod::lobpcg;
  }
  if (method == EigMethod::dense) return dense_path(K, mass, m, options);
  return lobpcg_path(K, mass, m, options);
}

SpectrumResult smallest_eigs(const DiscreteForm& form, int m, const EigOptions& options) {
  return smallest_eigs(form.K, form.mass, m, options);
}

double rayleigh_quotient(const linalg::CsrMatrix& K, const std::vector<double>& mass,
                         const std::vector<double>& u) {
  const std::size_t n = mass.size();
  if (u.size() != n) throw std::invalid_argument("rayleigh_quotient: size mismatch");
  const double um = simd::dot3(u.data(), u.data(), mass.data(), n);
  if (!(um > 0.0)) throw std::invalid_argument("rayleigh_quotient: zero vector");
  std::vector<double> ku(n);
  K.mul(u.data(), ku.data());
  return simd::dot(u.data(), ku.data(), n) / um;
}

double rayleigh_quotient(const DiscreteForm& form, const std::vector<double>& u) {
  return rayleigh_quotient(form.K, form.mass, u);
}

std::vector<double> solve_shifted(const DiscreteForm& form, double z,
                                  const std::vector<double>& rhs, double tol,
                                  int max_iterations) {
  if (rhs.size() != form.mass.size())
    throw std::invalid_argument("solve_shifted: size mismatch");
  const int cap = max_iterations > 0
                      ? max_iterations
                      : static_cast<int>(40.0 * std::sqrt(double(form.mass.size()))) + 500;
  return cg_shifted(form.K, form.mass, z, rhs, tol, cap);
}

std::string spectrum_json(const SpectrumResult& r) {
  std::ostringstream os;
  os << "{\"eigenvalues\":[";
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    if (i) os << ",";
    os << io::format_g17(r.eigenvalues[i]);
  }
  os << "],\"residuals\":[";
  for (std::size_t i = 0; i < r.residuals.size(); ++i) {
    if (i) os << ",";
    os << io::format_g17(r.residuals[i]);
  }
  os << "],\"solver\":\"" << r.solver << "\",\"iterations\":" << r.iterations
     << ",\"converged\":" << (r.converged ? "true" : "false") << "}";
  return os.str();
}

}  // namespace strips
