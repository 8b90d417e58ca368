#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "strips/discretize.hpp"
#include "strips/eigensolve.hpp"
#include "strips/util.hpp"

using namespace strips;

namespace {

StripModel straight_model(double halfwin, double a) {
  const int count = 2001;
  SGrid g{-halfwin, 2.0 * halfwin / (count - 1), count};
  return StripModel::direct(g, a, Profile::zero(), Profile::zero());
}

double dense_lowest(const DiscreteForm& form) {
  EigOptions opt;
  opt.method = EigMethod::dense;
  opt.want_vectors = false;
  return smallest_eigs(form, 1, opt).eigenvalues[0];
}

}  // namespace

TEST_CASE("straight strip separates exactly into the two discrete 1D modes") {
  const auto model = straight_model(11.0, 1.0);
  Mesh2D mesh{10.0, 1.0, 30, 12};
  const auto form = assemble_2d(model, mesh, EndCondition::dirichlet);
  const double exact =
      fd_dirichlet_eigenvalue(20.0, 30, 1) + fd_dirichlet_eigenvalue(2.0, 12, 1);
  const double got = dense_lowest(form);
  CHECK(got == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("straight strip: refinement toward pi^2/4 + (pi/20)^2 at second order") {
  const auto model = straight_model(11.0, 1.0);
  const double exact = M_PI * M_PI / 4.0 + std::pow(M_PI / 20.0, 2);
  EigOptions lob;
  lob.method = EigMethod::lobpcg;
  lob.tol = 1e-11;
  lob.want_vectors = false;
  double errs[2];
  int idx = 0;
  for (int scale : {1, 2}) {
    Mesh2D mesh{10.0, 1.0, 50 * scale + (scale - 1), 10 * scale + (scale - 1)};
    const auto form = assemble_2d(model, mesh, EndCondition::dirichlet);
    errs[idx++] = std::abs(smallest_eigs(form, 1, lob).eigenvalues[0] - exact);
  }
  const double ratio = errs[0] / errs[1];
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("neumann ends: constant longitudinal mode sits at the transverse threshold") {
  const auto model = straight_model(7.0, 1.0);
  Mesh2D mesh{6.0, 1.0, 24, 14};
  const auto form = assemble_2d(model, mesh, EndCondition::neumann);
  CHECK(form.s_count() == 26);
  // chi_1 x const is the exact discrete ground mode
  std::vector<double> u(form.mass.size());
  const double e1d = fd_dirichlet_eigenvalue(2.0, 14, 1);
  for (int i = 0; i < form.s_count(); ++i)
    for (int m = 0; m < form.nt; ++m)
      u[static_cast<std::size_t>(i) * form.nt + m] = std::cos(0.5 * M_PI * form.t_of_row(m));
  CHECK(rayleigh_quotient(form, u) == doctest::Approx(e1d).epsilon(1e-13));
  CHECK(dense_lowest(form) == doctest::Approx(e1d).epsilon(1e-12));
}

TEST_CASE("discrete bracketing: neumann floor below dirichlet floor") {
  SGrid g{-9.0, 18.0 / 1200, 1201};
  const auto model = StripModel::direct(g, 1.0, Profile::bump_profile(0.5, 0.0, 4.0),
                                        Profile::bump_profile(0.6, 1.0, 4.0));
  Mesh2D mesh{8.0, 1.0, 30, 10};
  const auto fd = assemble_2d(model, mesh, EndCondition::dirichlet);
  const auto fn = assemble_2d(model, mesh, EndCondition::neumann);
  CHECK(dense_lowest(fn) <= dense_lowest(fd) + 1e-12);
}

TEST_CASE("dirichlet eigenvalues do not increase when the window doubles") {
  SGrid g{-17.0, 34.0 / 3000, 3001};
  const auto model = StripModel::direct(g, 1.0, Profile::bump_profile(0.5, 0.0, 4.0),
                                        Profile::zero());
  Mesh2D small{8.0, 1.0, 20, 8};
  Mesh2D large{16.0, 1.0, 41, 8};  // same hs
  CHECK(std::abs(small.hs() - large.hs()) < 1e-14);
  const double lam_small = dense_lowest(assemble_2d(model, small, EndCondition::dirichlet));
  const double lam_large = dense_lowest(assemble_2d(model, large, EndCondition::dirichlet));
  CHECK(lam_large <= lam_small + 1e-12);
}

TEST_CASE("bent circle strip: symmetric K, mass within the f bounds") {
  SGrid g{-11.0, 22.0 / 1000, 1001};
  const auto model = StripModel::direct(g, 0.5, Profile::constant(1.0), Profile::zero());
  Mesh2D mesh{10.0, 0.5, 20, 8};
  const auto form = assemble_2d(model, mesh, EndCondition::dirichlet);
  // exact symmetry by construction
  for (int r = 0; r < form.K.rows(); r += 17)
    for (int p = form.K.rowptr()[r]; p < form.K.rowptr()[r + 1]; ++p)
      CHECK(form.K.at(form.K.colidx()[p], r) == form.K.values()[p]);
  const double lo = mesh.hs() * mesh.ht() * 0.5, hi = mesh.hs() * mesh.ht() * 1.5;
  for (double mv : form.mass) {
    CHECK(mv >= lo - 1e-15);
    CHECK(mv <= hi + 1e-15);
  }
  // PSD via random Rayleigh quotients
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> u(form.mass.size());
    for (auto& x : u) x = uni(rng);
    CHECK(rayleigh_quotient(form, u) >= 0.0);
  }
}

TEST_CASE("transverse fiber: flat fiber reproduces the discrete threshold") {
  const auto model = straight_model(2.0, 1.0);
  for (auto which : {TransverseFormulation::weighted, TransverseFormulation::potential}) {
    const auto form = assemble_transverse_1d(model, 100, 60, which);
    EigOptions opt;
    opt.want_vectors = false;
    const double e = smallest_eigs(form, 1, opt).eigenvalues[0];
    CHECK(e == doctest::Approx(fd_dirichlet_eigenvalue(2.0, 60, 1)).epsilon(1e-12));
  }
}

TEST_CASE("potential formulation requires an unbent node") {
  SGrid g{-2.0, 0.1, 41};
  const auto model = StripModel::direct(g, 0.5, Profile::constant(0.4), Profile::zero());
  CHECK_THROWS(assemble_transverse_1d(model, 5, 40, TransverseFormulation::potential));
  CHECK_NOTHROW(assemble_transverse_1d(model, 5, 40, TransverseFormulation::weighted));
}

TEST_CASE("borderline twist a|Theta'| = sqrt(2): potential vanishes only at the walls") {
  SGrid g{-2.0, 0.1, 41};
  const auto model =
      StripModel::direct(g, 1.0, Profile::zero(), Profile::constant(std::sqrt(2.0)));
  const int nt = 99;
  const auto pot = assemble_transverse_1d(model, 20, nt, TransverseFormulation::potential);
  const auto plain = straight_model(2.5, 1.0);
  const auto flat = assemble_transverse_1d(plain, 20, nt, TransverseFormulation::potential);
  // V >= 0 on the interior, smallest near the walls
  double vmin = 1e300, vmax = -1e300;
  int argmin = -1;
  for (int m = 0; m < nt; ++m) {
    const double v = pot.K.at(m, m) - flat.K.at(m, m);
    if (v < vmin) {
      vmin = v;
      argmin = m;
    }
    vmax = std::max(vmax, v);
  }
  CHECK(vmin >= 0.0);
  CHECK(vmax > 0.0);
  CHECK((argmin == 0 || argmin == nt - 1));
}

TEST_CASE("effective 1d: constant-potential boxes match closed forms") {
  SGrid g{-11.0, 22.0 / 2000, 2001};
  // pure twist beta = 1: V_eff = 1/2
  const auto twisted = StripModel::direct(g, 1.0, Profile::zero(), Profile::constant(1.0));
  Mesh1D mesh{-10.0, 10.0, 399};
  const auto form = assemble_effective_1d(twisted, mesh, {});
  EigOptions opt;
  opt.want_vectors = false;
  const double e = smallest_eigs(form, 1, opt).eigenvalues[0];
  CHECK(e == doctest::Approx(0.5 + fd_dirichlet_eigenvalue(20.0, 399, 1)).epsilon(1e-12));
  CHECK(e == doctest::Approx(0.524674).epsilon(1e-4));

  // pure bending kappa0: V_eff = -kappa0^2/4
  const auto bent = StripModel::direct(g, 0.5, Profile::constant(0.8), Profile::zero());
  const auto form2 = assemble_effective_1d(bent, mesh, {});
  const double e2 = smallest_eigs(form2, 1, opt).eigenvalues[0];
  CHECK(e2 ==
        doctest::Approx(-0.16 + fd_dirichlet_eigenvalue(20.0, 399, 1)).epsilon(1e-12));
}

TEST_CASE("poincare floor: transverse block dominates the unweighted threshold") {
  SGrid g{-7.0, 14.0 / 1000, 1001};
  const auto model = StripModel::direct(g, 1.0, Profile::zero(),
                                        Profile::bump_profile(1.0, 0.0, 4.0));
  Mesh2D mesh{6.0, 1.0, 18, 10};
  const auto K2 = assemble_2d_transverse_only(model, mesh, EndCondition::dirichlet);
  std::vector<double> m0(static_cast<std::size_t>(K2.rows()), mesh.hs() * mesh.ht());
  EigOptions opt;
  opt.method = EigMethod::dense;
  opt.want_vectors = false;
  const double floor = smallest_eigs(K2, m0, 1, opt).eigenvalues[0];
  CHECK(floor >= fd_dirichlet_eigenvalue(2.0, 10, 1) - 1e-11);
}

TEST_CASE("matrix market export of a form round trips") {
  const auto model = straight_model(3.0, 1.0);
  Mesh2D mesh{2.0, 1.0, 6, 5};
  const auto form = assemble_2d(model, mesh, EndCondition::dirichlet);
  std::stringstream ss;
  form.K.write_matrix_market(ss);
  const auto back = linalg::CsrMatrix::read_matrix_market(ss);
  REQUIRE(back.rows() == form.K.rows());
  for (int r = 0; r < back.rows(); ++r)
    for (int c = 0; c < back.cols(); ++c) CHECK(back.at(r, c) == form.K.at(r, c));
  CHECK(form_metadata_json(form).find("dirichlet") != std::string::npos);
}

TEST_CASE("mesh smaller than the model window is rejected") {
  const auto model = straight_model(3.0, 1.0);
  Mesh2D mesh{5.0, 1.0, 10, 5};
  CHECK_THROWS(assemble_2d(model, mesh, EndCondition::dirichlet));
}
