#include <doctest.h>

#include <cmath>
#include <random>

#include "strips/discretize.hpp"
#include "strips/eigensolve.hpp"
#include "strips/linalg/dense.hpp"
#include "strips/util.hpp"

using namespace strips;

namespace {

StripModel straight_model(double halfwin, double a) {
  const int count = 1601;
  SGrid g{-halfwin, 2.0 * halfwin / (count - 1), count};
  return StripModel::direct(g, a, Profile::zero(), Profile::zero());
}

StripModel generic_model(double halfwin) {
  const int count = 1601;
  SGrid g{-halfwin, 2.0 * halfwin / (count - 1), count};
  return StripModel::direct(g, 1.0, Profile::bump_profile(0.5, 0.0, 4.0),
                            Profile::bump_profile(0.7, -1.0, 5.0));
}

}  // namespace

TEST_CASE("1d dirichlet laplacian: tridiagonal path hits the closed form") {
  const auto model = straight_model(2.0, 1.0);
  const auto form = assemble_transverse_1d(model, 10, 999, TransverseFormulation::weighted);
  const auto res = smallest_eigs(form, 3, {});
  CHECK(res.solver == "tridiag-bisection");
  for (int j = 1; j <= 3; ++j)
    CHECK(res.eigenvalues[j - 1] ==
          doctest::Approx(fd_dirichlet_eigenvalue(2.0, 999, j)).epsilon(1e-10));
  CHECK(std::abs(res.eigenvalues[0] - M_PI * M_PI / 4.0) < 4.0e-6);  // O(ht^2)
  for (double r : res.residuals) CHECK(r < 1e-9);
  // M-orthonormality of the returned vectors
  for (std::size_t p = 0; p < res.eigenvectors.size(); ++p)
    for (std::size_t q = 0; q <= p; ++q) {
      double g = 0.0;
      for (std::size_t i = 0; i < form.mass.size(); ++i)
        g += res.eigenvectors[p][i] * form.mass[i] * res.eigenvectors[q][i];
      CHECK(g == doctest::Approx(p == q ? 1.0 : 0.0).epsilon(1e-8));
    }
}

TEST_CASE("identity pencil: every eigenvalue 1 with zero residual") {
  std::vector<linalg::Triplet> trips;
  for (int i = 0; i < 40; ++i) trips.push_back({i, i, 1.0});
  const auto I = linalg::CsrMatrix::from_triplets(40, 40, trips);
  std::vector<double> mass(40, 1.0);
  EigOptions opt;
  opt.method = EigMethod::lobpcg;
  const auto res = smallest_eigs(I, mass, 3, opt);
  for (double v : res.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  for (double r : res.residuals) CHECK(r < 1e-12);
}

TEST_CASE("oracle equivalence: lobpcg matches dense jacobi to 1e-8 on small meshes") {
  EigOptions dense;
  dense.method = EigMethod::dense;
  EigOptions lob;
  lob.method = EigMethod::lobpcg;
  lob.tol = 1e-10;

  SUBCASE("straight strip 24x24") {
    const auto model = straight_model(11.0, 1.0);
    Mesh2D mesh{10.0, 1.0, 24, 24};
    const auto form = assemble_2d(model, mesh, EndCondition::dirichlet);
    const auto d = smallest_eigs(form, 5, dense);
    const auto l = smallest_eigs(form, 5, lob);
    for (int j = 0; j < 5; ++j)
      CHECK(l.eigenvalues[j] == doctest::Approx(d.eigenvalues[j]).epsilon(1e-8));
  }
  SUBCASE("bent twisted strip 28x28") {
    const auto model = generic_model(9.0);
    Mesh2D mesh{8.0, 1.0, 28, 28};
    const auto form = assemble_2d(model, mesh, EndCondition::dirichlet);
    const auto d = smallest_eigs(form, 5, dense);
    const auto l = smallest_eigs(form, 5, lob);
    for (int j = 0; j < 5; ++j)
      CHECK(l.eigenvalues[j] == doctest::Approx(d.eigenvalues[j]).epsilon(1e-8));
  }
  SUBCASE("weighted transverse fiber: bisection matches jacobi") {
    const auto model = generic_model(9.0);
    const auto form = assemble_transverse_1d(model, 800, 300, TransverseFormulation::weighted);
    const auto d = smallest_eigs(form, 5, dense);
    const auto t = smallest_eigs(form, 5, {});
    CHECK(t.solver == "tridiag-bisection");
    for (int j = 0; j < 5; ++j)
      CHECK(t.eigenvalues[j] == doctest::Approx(d.eigenvalues[j]).epsilon(1e-8));
  }
}

TEST_CASE("lobpcg smallest Ritz value never increases") {
  const auto model = generic_model(9.0);
  Mesh2D mesh{8.0, 1.0, 40, 20};
  const auto form = assemble_2d(model, mesh, EndCondition::dirichlet);
  EigOptions opt;
  opt.method = EigMethod::lobpcg;
  const auto res = smallest_eigs(form, 2, opt);
  REQUIRE(res.ritz_history.size() > 3);
  for (std::size_t i = 1; i < res.ritz_history.size(); ++i)
    CHECK(res.ritz_history[i] <= res.ritz_history[i - 1] + 1e-12);
}

TEST_CASE("determinism: identical seeds give bitwise identical eigenvalues") {
  const auto model = generic_model(9.0);
  Mesh2D mesh{8.0, 1.0, 30, 15};
  const auto form = assemble_2d(model, mesh, EndCondition::dirichlet);
  EigOptions opt;
  opt.method = EigMethod::lobpcg;
  opt.seed = 1234;
  const auto r1 = smallest_eigs(form, 3, opt);
  const auto r2 = smallest_eigs(form, 3, opt);
  for (int j = 0; j < 3; ++j) CHECK(r1.eigenvalues[j] == r2.eigenvalues[j]);
}

TEST_CASE("rayleigh quotient consistency and variational floor") {
  const auto model = straight_model(9.0, 1.0);
  Mesh2D mesh{8.0, 1.0, 20, 10};
  const auto form = assemble_2d(model, mesh, EndCondition::dirichlet);
  EigOptions opt;
  opt.method = EigMethod::dense;
  const auto res = smallest_eigs(form, 1, opt);
  CHECK(rayleigh_quotient(form, res.eigenvectors[0]) ==
        doctest::Approx(res.eigenvalues[0]).epsilon(1e-12));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<double> u(form.mass.size());
    for (auto& x : u) x = uni(rng);
    CHECK(rayleigh_quotient(form, u) >= res.eigenvalues[0] - 1e-12);
  }
  CHECK_THROWS(rayleigh_quotient(form, std::vector<double>(form.mass.size(), 0.0)));
}

TEST_CASE("solve_shifted: eigen-decomposition identity and smoothing") {
  const auto model = straight_model(9.0, 1.0);
  Mesh2D mesh{8.0, 1.0, 16, 8};
  const auto form = assemble_2d(model, mesh, EndCondition::dirichlet);
  EigOptions opt;
  opt.method = EigMethod::dense;
  const auto res = smallest_eigs(form, 1, opt);
  const double z = -3.0;

  std::vector<double> rhs(form.mass.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = form.mass[i] * res.eigenvectors[0][i];
  const auto u = solve_shifted(form, z, rhs, 1e-12);
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(u[i] == doctest::Approx(res.eigenvectors[0][i] / (res.eigenvalues[0] - z))
                      .epsilon(1e-8));

  // zero right-hand side gives the zero solution
  const auto u0 = solve_shifted(form, z, std::vector<double>(rhs.size(), 0.0), 1e-12);
  for (double v : u0) CHECK(v == 0.0);

  // resolvent smoothing: z = 0 solve does not raise the Rayleigh quotient
  std::vector<double> bump_mode(form.mass.size());
  for (int i = 0; i < form.s_count(); ++i)
    for (int m = 0; m < form.nt; ++m) {
      const double s = form.s_of_column(i);
      const double t = form.t_of_row(m);
      bump_mode[static_cast<std::size_t>(i) * form.nt + m] =
          std::exp(-s * s) * std::cos(0.5 * M_PI * t);
    }
  std::vector<double> rhs2(form.mass.size());
  for (std::size_t i = 0; i < rhs2.size(); ++i) rhs2[i] = form.mass[i] * bump_mode[i];
  const auto w = solve_shifted(form, 0.0, rhs2, 1e-12);
  CHECK(rayleigh_quotient(form, w) <= rayleigh_quotient(form, bump_mode) + 1e-12);

  // dense cross-check of the same solve
  linalg::DenseMatrix A(form.K.rows());
  for (int r = 0; r < form.K.rows(); ++r)
    for (int p = form.K.rowptr()[r]; p < form.K.rowptr()[r + 1]; ++p)
      A(r, form.K.colidx()[p]) = form.K.values()[p];
  const auto wref = linalg::lu_solve(A, rhs2);
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK(w[i] == doctest::Approx(wref[i]).epsilon(1e-8));

  // a shift inside the spectrum is rejected
  CHECK_THROWS_AS((void)solve_shifted(form, res.eigenvalues[0] + 1.0, rhs, 1e-10), SolverError);
}

TEST_CASE("mass validation") {
  std::vector<linalg::Triplet> trips{{0, 0, 1.0}, {1, 1, 1.0}};
  const auto K = linalg::CsrMatrix::from_triplets(2, 2, trips);
  CHECK_THROWS(smallest_eigs(K, {1.0, 0.0}, 1, {}));
  CHECK_THROWS(smallest_eigs(K, {1.0, -2.0}, 1, {}));
}
