// AVX2+FMA lane. Compiled with -mavx2 -mfma; only reached after the runtime
// CPU check in kernels.cpp.

#include "strips/simd/kernels.hpp"

#if defined(STRIPS_BUILD_AVX2)

#include <immintrin.h>

namespace strips::simd {
namespace avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double dot3(const double* x, const double* y, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xy = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(xy, _mm256_loadu_pd(w + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i] * w[i];
  return s;
}

double nrm2sq(const double* x, std::size_t n) { return dot(x, x, n); }

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void dmul(const double* d, const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(d + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = d[i] * x[i];
}

void csr_spmv_range(const int* rowptr, const int* colidx, const double* vals,
                    const double* x, double* y, std::size_t row_begin,
                    std::size_t row_end) {
  for (std::size_t r = row_begin; r < row_end; ++r) {
    const int b = rowptr[r], e = rowptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    int p = b;
    for (; p + 4 <= e; p += 4) {
      __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(colidx + p));
      __m256d xv = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + p), xv, acc);
    }
    double s = hsum(acc);
    for (; p < e; ++p) s += vals[p] * x[colidx[p]];
    y[r] = s;
  }
}

}  // namespace avx2

const KernelTable& kernels_avx2() {
  static const KernelTable t = {avx2::dot,  avx2::dot3, avx2::nrm2sq, avx2::axpy,
                                avx2::scal, avx2::dmul, avx2::csr_spmv_range};
  return t;
}

}  // namespace strips::simd

#endif  // STRIPS_BUILD_AVX2
