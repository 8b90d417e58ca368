#include "strips/linalg/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace strips::linalg {

void jacobi_eigh(const DenseMatrix& A_in, std::vector<double>& evals, DenseMatrix& V,
                 int max_sweeps) {
  const int n = A_in.n;
  DenseMatrix A = A_in;
  V = DenseMatrix(n);
  for (int i = 0; i < n; ++i) V(i, i) = 1.0;

  double norm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) norm += A(i, j) * A(i, j);
  norm = std::sqrt(norm);
  const double stop = 1e-15 * std::max(norm, 1e-300);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += 2.0 * A(i, j) * A(i, j);
    if (std::sqrt(off) <= stop) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double app = A(p, p), aqq = A(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // A <- J^T A J on rows/cols p,q
        for (int k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  evals.resize(n);
  for (int i = 0; i < n; ++i) evals[i] = A(i, i);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return evals[a] < evals[b]; });
  std::vector<double> ev(n);
  DenseMatrix W(n);
  for (int j = 0; j < n; ++j) {
    ev[j] = evals[order[j]];
    for (int i = 0; i < n; ++i) W(i, j) = V(i, order[j]);
  }
  evals = std::move(ev);
  V = std::move(W);
}

bool cholesky(DenseMatrix& B) {
  const int n = B.n;
  for (int j = 0; j < n; ++j) {
    double d = B(j, j);
    for (int k = 0; k < j; ++k) d -= B(j, k) * B(j, k);
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    B(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = B(i, j);
      for (int k = 0; k < j; ++k) s -= B(i, k) * B(j, k);
      B(i, j) = s / ljj;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) B(i, j) = 0.0;
  return true;
}

void solve_lower(const DenseMatrix& L, std::vector<double>& b) {
  const int n = L.n;
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= L(i, k) * b[k];
    b[i] = s / L(i, i);
  }
}

void solve_lower_t(const DenseMatrix& L, std::vector<double>& b) {
  const int n = L.n;
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= L(k, i) * b[k];
    b[i] = s / L(i, i);
  }
}

void eigh_gen(const DenseMatrix& A, const DenseMatrix& B, std::vector<double>& evals,
              DenseMatrix& V) {
  const int n = A.n;
  DenseMatrix L = B;
  if (!cholesky(L)) throw std::runtime_error("eigh_gen: B not positive definite");

  // C = L^{-1} A L^{-T}
  DenseMatrix C = A;
  for (int j = 0; j < n; ++j) {  // columns: L^{-1} A
    std::vector<double> col(n);
    for (int i = 0; i < n; ++i) col[i] = C(i, j);
    solve_lower(L, col);
    for (int i = 0; i < n; ++i) C(i, j) = col[i];
  }
  for (int i = 0; i < n; ++i) {  // rows: (.) L^{-T}
    std::vector<double> row(n);
    for (int j = 0; j < n; ++j) row[j] = C(i, j);
    solve_lower(L, row);
    for (int j = 0; j < n; ++j) C(i, j) = row[j];
  }
  for (int i = 0; i < n; ++i)  // symmetrize roundoff
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (C(i, j) + C(j, i));
      C(i, j) = C(j, i) = v;
    }

  DenseMatrix Y;
  jacobi_eigh(C, evals, Y);
  V = DenseMatrix(n);
  for (int j = 0; j < n; ++j) {
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = Y(i, j);
    solve_lower_t(L, y);
    for (int i = 0; i < n; ++i) V(i, j) = y[i];
  }
}

std::vector<double> lu_solve(DenseMatrix A, std::vector<double> b) {
  const int n = A.n;
  std::vector<int> piv(n);
  std::iota(piv.begin(), piv.end(), 0);
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(p, k))) p = i;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(A.a[static_cast<std::size_t>(k) * n + j],
                                            A.a[static_cast<std::size_t>(p) * n + j]);
      std::swap(b[k], b[p]);
    }
    if (A(k, k) == 0.0) throw std::runtime_error("lu_solve: singular matrix");
    for (int i = k + 1; i < n; ++i) {
      const double m = A(i, k) / A(k, k);
      A(i, k) = m;
      for (int j = k + 1; j < n; ++j) A(i, j) -= m * A(k, j);
      b[i] -= m * b[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A(i, j) * b[j];
    b[i] = s / A(i, i);
  }
  return b;
}

int tridiag_count_below(const std::vector<double>& d, const std::vector<double>& e, double x) {
  const int n = static_cast<int>(d.size());
  int count = 0;
  double q = d[0] - x;
  if (q < 0.0) ++count;
  for (int i = 1; i < n; ++i) {
    const double e2 = e[i - 1] * e[i - 1];
    double denom = q;
    if (denom == 0.0) denom = std::numeric_limits<double>::min();
    q = d[i] - x - e2 / denom;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> tridiag_smallest(const std::vector<double>& d, const std::vector<double>& e,
                                     int m) {
  const int n = static_cast<int>(d.size());
  m = std::min(m, n);
  // Gershgorin bounds
  double lo = d[0], hi = d[0];
  for (int i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(e[i - 1]);
    if (i < n - 1) r += std::abs(e[i]);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  const double span = std::max(hi - lo, 1e-300);
  std::vector<double> out(m);
  for (int k = 0; k < m; ++k) {
    double a = lo, b = hi;
    // eigenvalue #k (0-based) is the unique x with count_below crossing k -> k+1
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (tridiag_count_below(d, e, mid) > k)
        b = mid;
      else
        a = mid;
      if (b - a <= 4e-16 * std::max(std::abs(a), std::abs(b))) break;
    }
    out[k] = 0.5 * (a + b);
    (void)span;
  }
  return out;
}

std::vector<double> tridiag_eigenvector(const std::vector<double>& d, const std::vector<double>& e,
                                        double lambda) {
  const int n = static_cast<int>(d.size());
  // Inverse iteration on (T - lambda I) with a tiny regularizing shift;
  // tridiagonal solve with partial pivoting (factors kept per iteration).
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(d[i]));
  for (int i = 0; i + 1 < n; ++i) scale = std::max(scale, std::abs(e[i]));
  const double shift = lambda + 1e-13 * std::max(scale, 1.0);

  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = ((i % 2) ? -1.0 : 1.0) / std::sqrt(double(n));

  for (int iter = 0; iter < 4; ++iter) {
    // Solve (T - shift) w = v, Gaussian elimination with row swaps over
    // bands (lower, diag, upper, upper2).
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), c2(n, 0.0), rhs = v;
    for (int i = 0; i < n; ++i) {
      b[i] = d[i] - shift;
      if (i > 0) a[i] = e[i - 1];
      if (i + 1 < n) c[i] = e[i];
    }
    for (int i = 0; i < n - 1; ++i) {
      if (std::abs(a[i + 1]) > std::abs(b[i])) {
        std::swap(b[i], a[i + 1]);
        std::swap(c[i], b[i + 1]);
        std::swap(c2[i], c[i + 1]);
        std::swap(rhs[i], rhs[i + 1]);
      }
      if (b[i] == 0.0) b[i] = 1e-300;
      const double m = a[i + 1] / b[i];
      b[i + 1] -= m * c[i];
      c[i + 1] -= m * c2[i];
      rhs[i + 1] -= m * rhs[i];
    }
    if (b[n - 1] == 0.0) b[n - 1] = 1e-300;
    std::vector<double> w(n);
    w[n - 1] = rhs[n - 1] / b[n - 1];
    if (n >= 2) w[n - 2] = (rhs[n - 2] - c[n - 2] * w[n - 1]) / b[n - 2];
    for (int i = n - 3; i >= 0; --i)
      w[i] = (rhs[i] - c[i] * w[i + 1] - c2[i] * w[i + 2]) / b[i];

    double nrm = 0.0;
    for (double x : w) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (int i = 0; i < n; ++i) v[i] = w[i] / nrm;
  }
  return v;
}

}  // namespace strips::linalg
