#include "strips/linalg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "strips/simd/kernels.hpp"
#include "strips/util.hpp"

namespace strips::linalg {

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> trips) {
  for (const auto& t : trips) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::invalid_argument("triplet index out of range");
  }
  std::sort(trips.begin(), trips.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  CsrMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.rowptr_.assign(rows + 1, 0);
  m.colidx_.reserve(trips.size());
  m.vals_.reserve(trips.size());
  std::size_t i = 0;
  for (int r = 0; r < rows; ++r) {
    m.rowptr_[r] = static_cast<int>(m.vals_.size());
    while (i < trips.size() && trips[i].row == r) {
      const int c = trips[i].col;
      double v = 0.0;
      while (i < trips.size() && trips[i].row == r && trips[i].col == c) {
        v += trips[i].value;
        ++i;
      }
      m.colidx_.push_back(c);
      m.vals_.push_back(v);
    }
  }
  m.rowptr_[rows] = static_cast<int>(m.vals_.size());
  return m;
}

void CsrMatrix::mul(const double* x, double* y) const {
  const std::size_t n = static_cast<std::size_t>(rows_);
  const int* rp = rowptr_.data();
  const int* ci = colidx_.data();
  const double* v = vals_.data();
  if (n >= 16384) {
    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
      simd::csr_spmv_range(rp, ci, v, x, y, lo, hi);
    });
  } else {
    simd::csr_spmv_range(rp, ci, v, x, y, 0, n);
  }
}

void CsrMatrix::mul(const std::vector<double>& x, std::vector<double>& y) const {
  if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("spmv size mismatch");
  y.resize(rows_);
  mul(x.data(), y.data());
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(rows_, 0.0);
  for (int r = 0; r < rows_; ++r)
    for (int p = rowptr_[r]; p < rowptr_[r + 1]; ++p)
      if (colidx_[p] == r) d[r] = vals_[p];
  return d;
}

bool CsrMatrix::is_tridiagonal() const {
  for (int r = 0; r < rows_; ++r)
    for (int p = rowptr_[r]; p < rowptr_[r + 1]; ++p)
      if (std::abs(colidx_[p] - r) > 1) return false;
  return true;
}

double CsrMatrix::at(int r, int c) const {
  for (int p = rowptr_[r]; p < rowptr_[r + 1]; ++p)
    if (colidx_[p] == c) return vals_[p];
  return 0.0;
}

void CsrMatrix::write_matrix_market(std::ostream& os) const {
  std::size_t nnz_lower = 0;
  for (int r = 0; r < rows_; ++r)
    for (int p = rowptr_[r]; p < rowptr_[r + 1]; ++p)
      if (colidx_[p] <= r) ++nnz_lower;
  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  os << rows_ << " " << cols_ << " " << nnz_lower << "\n";
  char buf[64];
  for (int r = 0; r < rows_; ++r) {
    for (int p = rowptr_[r]; p < rowptr_[r + 1]; ++p) {
      if (colidx_[p] > r) continue;
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", r + 1, colidx_[p] + 1, vals_[p]);
      os << buf;
    }
  }
}

CsrMatrix CsrMatrix::read_matrix_market(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("matrix market: empty stream");
  std::istringstream banner(line);
  std::string mm, object, format, field, symmetry;
  banner >> mm >> object >> format >> field >> symmetry;
  if (mm != "%%MatrixMarket" || object != "matrix" || format != "coordinate" || field != "real")
    throw std::runtime_error("matrix market: unsupported banner: " + line);
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general")
    throw std::runtime_error("matrix market: unsupported symmetry: " + symmetry);

  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sizes(line);
  int rows = 0, cols = 0;
  long nnz = 0;
  sizes >> rows >> cols >> nnz;
  if (rows <= 0 || cols <= 0 || nnz < 0) throw std::runtime_error("matrix market: bad size line");

  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
  for (long k = 0; k < nnz; ++k) {
    int i = 0, j = 0;
    double v = 0.0;
    if (!(is >> i >> j >> v)) throw std::runtime_error("matrix market: truncated entries");
    trips.push_back({i - 1, j - 1, v});
    if (symmetric && i != j) trips.push_back({j - 1, i - 1, v});
  }
  return from_triplets(rows, cols, std::move(trips));
}

}  // namespace strips::linalg
