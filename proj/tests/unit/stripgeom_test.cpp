#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "strips/curves.hpp"
#include "strips/frames.hpp"
#include "strips/stripgeom.hpp"
#include "strips/util.hpp"

using namespace strips;

namespace {
SGrid grid_over(double s0, double s1, int count) {
  return {s0, (s1 - s0) / (count - 1), count};
}
}  // namespace

TEST_CASE("straight strip from a line frame: k.Theta = 0, f = 1") {
  const auto c = make_analytic_curve(CurveFamily::line, {}, 3, grid_over(0.0, 4.0, 401));
  const auto res = build_rpaf(c, default_initial_normals(c, 0), 0);
  const auto twist = TwistProfile::constant(c.grid, {1.0, 0.0});
  const auto model = make_strip(res.frame, twist, 1.0);
  CHECK(model.provenance == StripProvenance::from_frame_and_twist);
  for (int i = 0; i < model.grid.count; i += 50) {
    CHECK(std::abs(model.kdotTheta[i]) < 1e-12);
    CHECK(std::abs(model.absThetaPrime[i]) < 1e-12);
    CHECK(jacobian_f(model, i, 0.7) == doctest::Approx(1.0));
  }
}

TEST_CASE("circle strip bent in-plane: k.Theta = 1, f = 1 - t") {
  const auto c = make_analytic_curve(CurveFamily::circle, {{"radius", 1.0}}, 3,
                                     grid_over(0.0, 5.0, 2501));
  std::vector<double> normals = {-1, 0, 0, 0, 0, 1};  // N1 inward, N2 = e3
  const auto res = build_rpaf(c, normals, 0);
  const auto twist = TwistProfile::constant(c.grid, {1.0, 0.0});
  const auto model = make_strip(res.frame, twist, 0.5);
  for (int i = 0; i < model.grid.count; i += 250) {
    CHECK(model.kdotTheta[i] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(jacobian_f(model, i, 0.3) == doctest::Approx(0.7).epsilon(1e-6));
  }

  // orthogonal twist: unbent even though the curve is curved
  const auto twist2 = TwistProfile::constant(c.grid, {0.0, 1.0});
  const auto model2 = make_strip(res.frame, twist2, 0.5);
  for (int i = 0; i < model2.grid.count; i += 250) {
    CHECK(std::abs(model2.kdotTheta[i]) < 1e-6);
    CHECK(jacobian_f(model2, i, 0.49) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("assumption 2.1 violation carries the offending node") {
  const SGrid g = grid_over(-5.0, 5.0, 101);
  CHECK_THROWS_AS((void)StripModel::direct(g, 1.0, Profile::bump_profile(1.2, 0.0, 4.0),
                                           Profile::zero()),
                  AssumptionError);
  try {
    (void)StripModel::direct(g, 1.0, Profile::bump_profile(1.2, 0.0, 4.0), Profile::zero());
  } catch (const AssumptionError& e) {
    CHECK(e.flag == "ass21");
    CHECK(e.witness_node == 50);  // bump peak at the window center
  }
}

TEST_CASE("jacobian closed forms") {
  const SGrid g = grid_over(-2.0, 2.0, 41);
  const auto twisted = StripModel::direct(g, 1.0, Profile::zero(), Profile::constant(0.8));
  const auto bent = StripModel::direct(g, 0.5, Profile::constant(0.6), Profile::zero());
  for (double t : {-0.9, -0.3, 0.0, 0.4, 0.9}) {
    CHECK(jacobian_f(twisted, 3, t) == doctest::Approx(std::sqrt(1.0 + t * t * 0.64)));
  }
  for (double t : {-0.5, -0.1, 0.0, 0.2, 0.5}) {
    CHECK(jacobian_f(bent, 7, t) == doctest::Approx(1.0 - 0.6 * t));
  }
  CHECK(jacobian_f(bent, 0, 0.0) == 1.0);
  CHECK_THROWS(jacobian_f(bent, 0, 0.51));

  // lower bound from the assumption
  const double floor = 1.0 - 0.5 * 0.6;
  for (double t : {-0.5, 0.0, 0.5}) CHECK(jacobian_f(bent, 1, t) >= floor - 1e-15);
}

TEST_CASE("f is convex in t (second differences)") {
  const SGrid g = grid_over(-1.0, 1.0, 21);
  const auto m = StripModel::direct(g, 1.0, Profile::constant(0.4), Profile::constant(0.9));
  const double dt = 0.05;
  for (int i = 0; i < g.count; ++i)
    for (double t = -0.9; t <= 0.9; t += 0.1) {
      const double second =
          jacobian_f(m, i, t - dt) - 2.0 * jacobian_f(m, i, t) + jacobian_f(m, i, t + dt);
      CHECK(second >= -1e-10);
    }
}

TEST_CASE("gauss curvature closed forms and sign") {
  const SGrid g = grid_over(-2.0, 2.0, 41);
  const auto untwisted = StripModel::direct(g, 1.0, Profile::constant(0.5), Profile::zero());
  for (double t : {-0.8, 0.0, 0.8}) CHECK(gauss_curvature(untwisted, 5, t) == 0.0);

  const auto twisted = StripModel::direct(g, 1.0, Profile::zero(), Profile::constant(1.0));
  CHECK(gauss_curvature(twisted, 5, 0.0) == doctest::Approx(-1.0));
  CHECK(gauss_curvature(twisted, 5, 1.0) == doctest::Approx(-0.25));

  const auto generic =
      StripModel::direct(g, 1.0, Profile::bump_profile(0.5, 0.0, 2.0),
                         Profile::bump_profile(0.7, 0.5, 2.0));
  for (int i = 0; i < g.count; ++i)
    for (double t : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      const double G = gauss_curvature(generic, i, t);
      CHECK(G <= 0.0);
      if (generic.absThetaPrime[i] < 1e-12) CHECK(G == 0.0);
      if (generic.absThetaPrime[i] > 1e-6) CHECK(G < 0.0);
    }
}

TEST_CASE("embedding: straight strip is a flat rectangle, circle strip an annulus") {
  const auto line = make_analytic_curve(CurveFamily::line, {}, 3, grid_over(0.0, 3.0, 61));
  const auto fr_line = build_rpaf(line, default_initial_normals(line, 0), 0);
  const auto tw_line = TwistProfile::constant(line.grid, {1.0, 0.0});
  const auto m_line = make_strip(fr_line.frame, tw_line, 1.0);
  const auto rect = embed(m_line, line, fr_line.frame, tw_line, 9);
  for (std::size_t p = 0; p < rect.s.size(); ++p) CHECK(std::abs(rect.points[p * 3 + 2]) < 1e-14);

  const auto circ = make_analytic_curve(CurveFamily::circle, {{"radius", 1.0}}, 3,
                                        grid_over(0.0, 6.0, 601));
  std::vector<double> normals = {-1, 0, 0, 0, 0, 1};
  const auto fr = build_rpaf(circ, normals, 0);
  const auto tw = TwistProfile::constant(circ.grid, {1.0, 0.0});
  const auto m = make_strip(fr.frame, tw, 0.5);
  const auto ann = embed(m, circ, fr.frame, tw, 11);
  // in-plane twist: every embedded point stays in the z = 0 plane
  for (std::size_t p = 0; p < ann.s.size(); ++p) CHECK(std::abs(ann.points[p * 3 + 2]) < 1e-12);

  // no self-intersection flags while the inner edge stays away from the center
  const auto rep = check_injectivity(ann, 0.008);
  CHECK(rep.flags.empty());
}

TEST_CASE("degenerating inner edge raises injectivity flags near t = +a") {
  // open arc: stay away from the closing seam of the full circle
  const auto circ = make_analytic_curve(CurveFamily::circle, {{"radius", 1.0}}, 3,
                                        grid_over(0.0, 5.0, 251));
  std::vector<double> normals = {-1, 0, 0, 0, 0, 1};
  const auto fr = build_rpaf(circ, normals, 0);
  const auto tw = TwistProfile::constant(circ.grid, {1.0, 0.0});
  const auto m = make_strip(fr.frame, tw, 0.999);
  const auto surf = embed(m, circ, fr.frame, tw, 21);
  // separation scaled to the collapsing rim: chord ~ (1 - t) * 3 ds
  const auto rep = check_injectivity(surf, 0.004);
  REQUIRE(!rep.flags.empty());
  // every flag involves points near the inner rim t = +a
  for (const auto& f : rep.flags) {
    CHECK(std::max(surf.t[f.i], surf.t[f.j]) > 0.9);
  }
}

TEST_CASE("geodesic curvature of the centerline matches k.Theta") {
  const auto helix = make_analytic_curve(CurveFamily::helix, {{"radius", 1.0}, {"pitch", 1.0}},
                                         3, grid_over(0.0, 6.0, 1201));
  const auto fr = build_rpaf(helix, default_initial_normals(helix, 0), 0);
  const auto tw = TwistProfile::constant(helix.grid, {1.0, 0.0});
  const auto m = make_strip(fr.frame, tw, 0.4);
  const auto surf = embed(m, helix, fr.frame, tw, 5);
  const int nt = surf.nt;
  const int mid = nt / 2;  // t = 0 row
  const double ds = helix.grid.ds;
  auto pt = [&](int i, int k) {
    return surf.points[(static_cast<std::size_t>(i) * nt + mid) * 3 + k];
  };
  double worst = 0.0;
  for (int i = 2; i + 2 < surf.ns; i += 14) {
    double gamma2[3], tangent[3], nu[3], tvec[3];
    for (int k = 0; k < 3; ++k) {
      gamma2[k] = (pt(i + 1, k) - 2.0 * pt(i, k) + pt(i - 1, k)) / (ds * ds);
      tangent[k] = (pt(i + 1, k) - pt(i - 1, k)) / (2.0 * ds);
      tvec[k] = surf.points[(static_cast<std::size_t>(i) * nt + mid + 1) * 3 + k] -
                surf.points[(static_cast<std::size_t>(i) * nt + mid) * 3 + k];
    }
    // surface normal ~ tangent x t-direction; in-surface normal = nu x tangent
    nu[0] = tangent[1] * tvec[2] - tangent[2] * tvec[1];
    nu[1] = tangent[2] * tvec[0] - tangent[0] * tvec[2];
    nu[2] = tangent[0] * tvec[1] - tangent[1] * tvec[0];
    double nn = std::sqrt(nu[0] * nu[0] + nu[1] * nu[1] + nu[2] * nu[2]);
    for (double& v : nu) v /= nn;
    double inplane[3];
    inplane[0] = nu[1] * tangent[2] - nu[2] * tangent[1];
    inplane[1] = nu[2] * tangent[0] - nu[0] * tangent[2];
    inplane[2] = nu[0] * tangent[1] - nu[1] * tangent[0];
    const double kg = gamma2[0] * inplane[0] + gamma2[1] * inplane[1] + gamma2[2] * inplane[2];
    worst = std::max(worst, std::abs(kg - m.kdotTheta[i]));
  }
  CHECK(worst < 20.0 * ds);
}

TEST_CASE("assumption report flags") {
  const SGrid g = grid_over(-10.0, 10.0, 2001);
  const auto good = StripModel::direct(g, 1.0, Profile::bump_profile(0.5, 0.0, 4.0),
                                       Profile::bump_profile(0.8, 0.0, 4.0));
  const auto rep = validate_assumptions(good);
  CHECK(rep.ass21_ok);
  CHECK(rep.hardy_smallness_ok);
  CHECK(rep.asymptotically_flat_ok);
  CHECK(rep.thin_ass_ok);
  CHECK(assumption_report_json(rep).find("true") != std::string::npos);

  const auto too_twisted =
      StripModel::direct(g, 1.0, Profile::zero(), Profile::constant(1.5));
  const auto rep2 = validate_assumptions(too_twisted);
  CHECK(!rep2.hardy_smallness_ok);  // 1.5 > sqrt(2)
  CHECK(!rep2.asymptotically_flat_ok);
  CHECK(!rep2.hardy_witnesses.empty());
}

TEST_CASE("twist profile construction and bump rotation rate") {
  const SGrid g = grid_over(-6.0, 6.0, 1201);
  const auto tw = TwistProfile::bump_rotation(g, 2, 0, 1, 1.0, 0.0, 4.0);
  tw.validate();
  for (int i = 0; i < g.count; ++i) {
    const double want = Profile::bump_profile(1.0, 0.0, 4.0)(g.node(i));
    CHECK(tw.rate_at(i) == doctest::Approx(want).epsilon(1e-12));
  }
  // sampled profile renormalizes and differentiates
  std::vector<double> samples(static_cast<std::size_t>(g.count) * 2);
  for (int i = 0; i < g.count; ++i) {
    samples[static_cast<std::size_t>(i) * 2] = std::cos(0.3 * g.node(i));
    samples[static_cast<std::size_t>(i) * 2 + 1] = std::sin(0.3 * g.node(i));
  }
  const auto tw2 = TwistProfile::from_samples(g, 2, samples);
  tw2.validate();
  for (int i = 1; i + 1 < g.count; i += 100)
    CHECK(tw2.rate_at(i) == doctest::Approx(0.3).epsilon(1e-4));
}

TEST_CASE("surface exports write csv and obj") {
  namespace fs = std::filesystem;
  const auto line = make_analytic_curve(CurveFamily::line, {}, 3, grid_over(0.0, 1.0, 11));
  const auto fr = build_rpaf(line, default_initial_normals(line, 0), 0);
  const auto tw = TwistProfile::constant(line.grid, {1.0, 0.0});
  const auto m = make_strip(fr.frame, tw, 0.5);
  const auto surf = embed(m, line, fr.frame, tw, 5);
  const auto dir = fs::temp_directory_path();
  write_surface_csv(surf, (dir / "strips_surf.csv").string());
  write_surface_obj(surf, (dir / "strips_surf.obj").string());
  CHECK(fs::file_size(dir / "strips_surf.csv") > 100);
  CHECK(fs::file_size(dir / "strips_surf.obj") > 100);
  fs::remove(dir / "strips_surf.csv");
  fs::remove(dir / "strips_surf.obj");
}
