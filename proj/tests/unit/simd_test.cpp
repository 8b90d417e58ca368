#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "strips/linalg/sparse.hpp"
#include "strips/simd/kernels.hpp"

using namespace strips;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = uni(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar and avx2 lanes agree on every kernel") {
  if (!simd::avx2_available()) {
    MESSAGE("avx2 not available; lane equivalence skipped");
    return;
  }
  const auto& ref = simd::kernels_scalar();
  const auto& vec = simd::kernels_avx2();

  for (std::size_t n : {1u, 3u, 4u, 7u, 8u, 33u, 1000u, 4097u}) {
    const auto x = random_vec(n, 11 + n);
    const auto y = random_vec(n, 23 + n);
    const auto w = random_vec(n, 37 + n);

    const double tol = 1e-13 * std::max<double>(1.0, std::sqrt(double(n)));
    CHECK(ref.dot(x.data(), y.data(), n) ==
          doctest::Approx(vec.dot(x.data(), y.data(), n)).epsilon(tol));
    CHECK(ref.dot3(x.data(), y.data(), w.data(), n) ==
          doctest::Approx(vec.dot3(x.data(), y.data(), w.data(), n)).epsilon(tol));
    CHECK(ref.nrm2sq(x.data(), n) == doctest::Approx(vec.nrm2sq(x.data(), n)).epsilon(tol));

    auto y1 = y, y2 = y;
    ref.axpy(0.37, x.data(), y1.data(), n);
    vec.axpy(0.37, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));

    auto x1 = x, x2 = x;
    ref.scal(-1.7, x1.data(), n);
    vec.scal(-1.7, x2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(x1[i] == x2[i]);

    std::vector<double> z1(n), z2(n);
    ref.dmul(w.data(), x.data(), z1.data(), n);
    vec.dmul(w.data(), x.data(), z2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(z1[i] == z2[i]);
  }
}

TEST_CASE("spmv lanes agree on a random sparse matrix") {
  if (!simd::avx2_available()) return;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_int_distribution<int> cols(0, 299);

  const int n = 300;
  std::vector<linalg::Triplet> trips;
  for (int r = 0; r < n; ++r) {
    const int nnz = 1 + (r % 9);  // rows of varying length, incl. remainder tails
    for (int q = 0; q < nnz; ++q) trips.push_back({r, cols(rng), uni(rng)});
  }
  const auto A = linalg::CsrMatrix::from_triplets(n, n, trips);
  const auto x = random_vec(n, 5);

  std::vector<double> y1(n), y2(n);
  simd::kernels_scalar().csr_spmv_range(A.rowptr().data(), A.colidx().data(), A.values().data(),
                                        x.data(), y1.data(), 0, n);
  simd::kernels_avx2().csr_spmv_range(A.rowptr().data(), A.colidx().data(), A.values().data(),
                                      x.data(), y2.data(), 0, n);
  for (int i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-13));
}

TEST_CASE("dispatch honors forced lanes") {
  simd::force_isa(simd::Isa::scalar);
  CHECK(simd::active_isa() == simd::Isa::scalar);
  const double x[4] = {1, 2, 3, 4};
  CHECK(simd::dot(x, x, 4) == doctest::Approx(30.0));
  if (simd::avx2_available()) {
    simd::force_isa(simd::Isa::avx2);
    CHECK(simd::active_isa() == simd::Isa::avx2);
    CHECK(simd::dot(x, x, 4) == doctest::Approx(30.0));
  }
}
