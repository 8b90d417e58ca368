#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace strips::linalg {

struct Triplet {
  int row, col;
  double value;
};

// Symmetric sparse matrix stored as full CSR (both triangles) for fast
// matvec; Matrix Market IO writes the lower triangle only.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> trips);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return vals_.size(); }

  void mul(const double* x, double* y) const;  // y = A x
  void mul(const std::vector<double>& x, std::vector<double>& y) const;

  std::vector<double> diagonal() const;
  bool is_tridiagonal() const;  // |row-col| <= 1 for every entry

  double at(int r, int c) const;  // 0 if absent (test/diagnostic use)

  const std::vector<int>& rowptr() const { return rowptr_; }
  const std::vector<int>& colidx() const { return colidx_; }
  const std::vector<double>& values() const { return vals_; }

  void write_matrix_market(std::ostream& os) const;
  static CsrMatrix read_matrix_market(std::istream& is);

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<int> rowptr_, colidx_;
  std::vector<double> vals_;
};

}  // namespace strips::linalg
