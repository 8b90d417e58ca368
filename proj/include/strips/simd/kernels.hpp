#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel kernels behind the sparse/iterative solvers. A scalar
// reference implementation always exists; on x86 an AVX2 variant is compiled
// in and selected at runtime. Variants are equivalence-tested against the
// scalar reference (see tests). Selection is per-process and sticky, so a
// given platform and build produce bit-identical runs.

namespace strips::simd {

enum class Isa { scalar, avx2 };

// Lane currently in use. Respects STRIP_SPECTRA_SIMD=scalar|avx2|auto on
// first call; avx2 falls back to scalar when the CPU lacks it.
Isa active_isa();
const char* isa_name(Isa isa);
// Force a lane (tests). Throws if the requested lane is unavailable.
void force_isa(Isa isa);
bool avx2_available();

double dot(const double* x, const double* y, std::size_t n);
// Weighted dot: sum x[i]*y[i]*w[i]. Used for mass-weighted inner products.
double dot3(const double* x, const double* y, const double* w, std::size_t n);
double nrm2sq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);   // y += a*x
void scal(double a, double* x, std::size_t n);                    // x *= a
void dmul(const double* d, const double* x, double* y, std::size_t n);  // y = d.*x

// y = A*x for CSR A over rows [row_begin, row_end).
void csr_spmv_range(const int* rowptr, const int* colidx, const double* vals,
                    const double* x, double* y, std::size_t row_begin,
                    std::size_t row_end);

// Raw tables, one entry per kernel, used by the dispatcher and the
// equivalence tests.
struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*dot3)(const double*, const double*, const double*, std::size_t);
  double (*nrm2sq)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
  void (*dmul)(const double*, const double*, double*, std::size_t);
  void (*csr_spmv_range)(const int*, const int*, const double*, const double*,
                         double*, std::size_t, std::size_t);
};

const KernelTable& kernels_scalar();
#if defined(STRIPS_BUILD_AVX2)
const KernelTable& kernels_avx2();
#endif

}  // namespace strips::simd
