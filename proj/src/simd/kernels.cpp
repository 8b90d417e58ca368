#include "strips/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace strips::simd {

// --- scalar reference lane ---------------------------------------------------

namespace scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double dot3(const double* x, const double* y, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i] * w[i];
  return s;
}

double nrm2sq(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void dmul(const double* d, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = d[i] * x[i];
}

void csr_spmv_range(const int* rowptr, const int* colidx, const double* vals,
                    const double* x, double* y, std::size_t row_begin,
                    std::size_t row_end) {
  for (std::size_t r = row_begin; r < row_end; ++r) {
    double s = 0.0;
    for (int p = rowptr[r]; p < rowptr[r + 1]; ++p) s += vals[p] * x[colidx[p]];
    y[r] = s;
  }
}

}  // namespace scalar

const KernelTable& kernels_scalar() {
  static const KernelTable t = {scalar::dot,  scalar::dot3, scalar::nrm2sq,
                                scalar::axpy, scalar::scal, scalar::dmul,
                                scalar::csr_spmv_range};
  return t;
}

// --- runtime dispatch --------------------------------------------------------

bool avx2_available() {
#if defined(STRIPS_BUILD_AVX2) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

std::atomic<const KernelTable*> g_active{nullptr};
std::atomic<Isa> g_isa{Isa::scalar};

const KernelTable* select_initial() {
  Isa want = Isa::avx2;
  if (const char* env = std::getenv("STRIP_SPECTRA_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) want = Isa::scalar;
    else if (std::strcmp(env, "avx2") == 0) want = Isa::avx2;
    // "auto" or anything else: keep default
  }
#if defined(STRIPS_BUILD_AVX2)
  if (want == Isa::avx2 && avx2_available()) {
    g_isa.store(Isa::avx2);
    return &kernels_avx2();
  }
#endif
  (void)want;
  g_isa.store(Isa::scalar);
  return &kernels_scalar();
}

inline const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (!t) {
    t = select_initial();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

}  // namespace

Isa active_isa() {
  active();
  return g_isa.load();
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) {
  if (isa == Isa::scalar) {
    g_active.store(&kernels_scalar());
    g_isa.store(Isa::scalar);
    return;
  }
#if defined(STRIPS_BUILD_AVX2)
  if (isa == Isa::avx2 && avx2_available()) {
    g_active.store(&kernels_avx2());
    g_isa.store(Isa::avx2);
    return;
  }
#endif
  throw std::runtime_error(std::string("simd lane unavailable: ") + isa_name(isa));
}

double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
double dot3(const double* x, const double* y, const double* w, std::size_t n) {
  return active().dot3(x, y, w, n);
}
double nrm2sq(const double* x, std::size_t n) { return active().nrm2sq(x, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
void scal(double a, double* x, std::size_t n) { active().scal(a, x, n); }
void dmul(const double* d, const double* x, double* y, std::size_t n) { active().dmul(d, x, y, n); }
void csr_spmv_range(const int* rowptr, const int* colidx, const double* vals,
                    const double* x, double* y, std::size_t row_begin, std::size_t row_end) {
  active().csr_spmv_range(rowptr, colidx, vals, x, y, row_begin, row_end);
}

}  // namespace strips::simd
