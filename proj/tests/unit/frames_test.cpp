#include <doctest.h>

#include <cmath>

#include "strips/curves.hpp"
#include "strips/frames.hpp"

using namespace strips;

namespace {

SGrid grid_over(double s0, double s1, int count) {
  return {s0, (s1 - s0) / (count - 1), count};
}

Curve helix_curve(double s1, int count) {
  return make_analytic_curve(CurveFamily::helix, {{"radius", 1.0}, {"pitch", 1.0}}, 3,
                             grid_over(0.0, s1, count));
}

// planar curve from a tangent-angle law, arc-length by construction
Curve tangent_angle_curve_2d(const SGrid& grid, double amp) {
  Curve c;
  c.dim = 2;
  c.grid = grid;
  c.points.assign(static_cast<std::size_t>(grid.count) * 2, 0.0);
  c.tangents.resize(static_cast<std::size_t>(grid.count) * 2);
  auto alpha = [&](double s) { return amp * std::sin(s); };
  for (int i = 0; i < grid.count; ++i) {
    c.tangents[static_cast<std::size_t>(i) * 2] = std::cos(alpha(grid.node(i)));
    c.tangents[static_cast<std::size_t>(i) * 2 + 1] = std::sin(alpha(grid.node(i)));
  }
  for (int i = 1; i < grid.count; ++i) {
    const double a = grid.node(i - 1), b = grid.node(i), m = 0.5 * (a + b);
    for (int q = 0; q < 2; ++q) {
      auto tq = [&](double s) { return q == 0 ? std::cos(alpha(s)) : std::sin(alpha(s)); };
      c.points[static_cast<std::size_t>(i) * 2 + q] =
          c.points[static_cast<std::size_t>(i - 1) * 2 + q] +
          (b - a) / 6.0 * (tq(a) + 4.0 * tq(m) + tq(b));
    }
  }
  return c;
}

}  // namespace

TEST_CASE("straight line: constant frame, zero curvature vector") {
  const auto c = make_analytic_curve(CurveFamily::line, {}, 4, grid_over(0.0, 5.0, 201));
  std::vector<double> normals = {0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  const auto res = build_rpaf(c, normals, 0);
  CHECK(res.frame.max_orthonormality_defect() < 1e-12);
  for (int i = 0; i < c.grid.count; i += 40) {
    CHECK(res.frame.normal(0, i)[1] == doctest::Approx(1.0));
    CHECK(res.frame.normal(2, i)[3] == doctest::Approx(1.0));
    for (int j = 0; j < 3; ++j) CHECK(std::abs(res.frame.k.at(i)[j]) < 1e-12);
  }
  CHECK(res.plan.segments.size() == 1);
}

TEST_CASE("planar circle in R^3: N2 = e3 stays put, k = (1, 0)") {
  const auto c = make_analytic_curve(CurveFamily::circle, {{"radius", 1.0}}, 3,
                                     grid_over(0.0, 6.2, 6201));
  // N1(0) = inward normal, N2(0) = e3
  std::vector<double> normals = {-1, 0, 0, 0, 0, 1};
  const auto res = build_rpaf(c, normals, 0);
  for (int i = 0; i < c.grid.count; i += 500) {
    CHECK(std::abs(res.frame.normal(1, i)[2] - 1.0) < 1e-8);
    CHECK(res.frame.k.at(i)[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(res.frame.k.at(i)[1]) < 1e-6);
  }
  CHECK(res.frame.max_orthonormality_defect() < 1e-10);
}

TEST_CASE("helix: rpaf rotates against Frenet by the torsion primitive") {
  const int count = 20001;  // ds = 1e-3
  const auto c = helix_curve(20.0, count);
  const auto fr = frenet_frame_3d(c);
  std::vector<double> normals(6);
  for (int q = 0; q < 3; ++q) {
    normals[q] = fr.M1[q];
    normals[3 + q] = fr.M2[q];
  }
  const auto res = build_rpaf(c, normals, 0);
  CHECK(res.frame.max_orthonormality_defect() < 1e-8);

  const double tau = 0.5;
  double worst = 0.0;
  double prev = 0.0, offset = 0.0;
  for (int i = 0; i < count; ++i) {
    double ct = 0.0, st = 0.0;
    for (int q = 0; q < 3; ++q) {
      ct += res.frame.normal(0, i)[q] * fr.M1[static_cast<std::size_t>(i) * 3 + q];
      st -= res.frame.normal(0, i)[q] * fr.M2[static_cast<std::size_t>(i) * 3 + q];
    }
    double theta = std::atan2(st, ct) + offset;
    while (theta - prev > M_PI) {
      theta -= 2.0 * M_PI;
      offset -= 2.0 * M_PI;
    }
    while (theta - prev < -M_PI) {
      theta += 2.0 * M_PI;
      offset += 2.0 * M_PI;
    }
    prev = theta;
    worst = std::max(worst, std::abs(theta - tau * c.grid.node(i)));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("frenet frame: circle is torsion free, line is rejected") {
  const auto circ = make_analytic_curve(CurveFamily::circle, {{"radius", 2.0}}, 3,
                                        grid_over(0.0, 8.0, 801));
  const auto fr = frenet_frame_3d(circ);
  for (int i = 0; i < circ.grid.count; i += 100) {
    CHECK(fr.kappa[i] == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(std::abs(fr.tau[i]) < 1e-6);
  }
  const auto line = make_analytic_curve(CurveFamily::line, {}, 3, grid_over(0.0, 1.0, 11));
  CHECK_THROWS(frenet_frame_3d(line));
}

TEST_CASE("uniqueness: forced chart switches do not change the frame") {
  const auto c = helix_curve(12.0, 4001);
  const auto normals = default_initial_normals(c, 0);
  const auto a = build_rpaf(c, normals, 0);
  RpafOptions opts;
  opts.max_segment_nodes = 137;
  const auto b = build_rpaf(c, normals, 0, opts);
  CHECK(b.plan.segments.size() > a.plan.segments.size());
  double worst = 0.0;
  for (int i = 0; i < c.grid.count; ++i)
    for (int j = 0; j < 2; ++j)
      for (int q = 0; q < 3; ++q)
        worst = std::max(worst, std::abs(a.frame.normal(j, i)[q] - b.frame.normal(j, i)[q]));
  CHECK(worst < 1e-8);
}

TEST_CASE("equivariance: rotated initial normals rotate the curvature vector") {
  const auto c = helix_curve(10.0, 2001);
  const auto base = default_initial_normals(c, 0);
  const double al = 0.83;
  std::vector<double> rotated(6);
  for (int q = 0; q < 3; ++q) {
    rotated[q] = std::cos(al) * base[q] + std::sin(al) * base[3 + q];
    rotated[3 + q] = -std::sin(al) * base[q] + std::cos(al) * base[3 + q];
  }
  const auto f1 = build_rpaf(c, base, 0).frame;
  const auto f2 = build_rpaf(c, rotated, 0).frame;
  for (int i = 0; i < c.grid.count; i += 200) {
    const double k1a = f1.k.at(i)[0], k1b = f1.k.at(i)[1];
    const double expect0 = std::cos(al) * k1a + std::sin(al) * k1b;
    const double expect1 = -std::sin(al) * k1a + std::cos(al) * k1b;
    CHECK(f2.k.at(i)[0] == doctest::Approx(expect0).epsilon(1e-8));
    CHECK(f2.k.at(i)[1] == doctest::Approx(expect1).epsilon(1e-8));
    CHECK(f1.k.norm_at(i) == doctest::Approx(f2.k.norm_at(i)).epsilon(1e-10));
  }
}

TEST_CASE("relatively parallel combinations keep their length") {
  const auto c = helix_curve(15.0, 3001);
  const auto res = build_rpaf(c, default_initial_normals(c, 0), 0);
  const double coef[2] = {0.6, -1.1};
  const double want = std::sqrt(coef[0] * coef[0] + coef[1] * coef[1]);
  double worst = 0.0;
  for (int i = 0; i < c.grid.count; ++i) {
    double nrm = 0.0;
    for (int q = 0; q < 3; ++q) {
      const double v = coef[0] * res.frame.normal(0, i)[q] + coef[1] * res.frame.normal(1, i)[q];
      nrm += v * v;
    }
    worst = std::max(worst, std::abs(std::sqrt(nrm) - want));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("2d: rpaf reproduces the Frenet normal and signed curvature") {
  const auto c = tangent_angle_curve_2d(grid_over(0.0, 6.0, 6001), 0.3);
  c.validate();
  const auto fr2 = frenet_frame_2d(c);
  std::vector<double> normals = {fr2.normal[0], fr2.normal[1]};
  const auto res = build_rpaf(c, normals, 0);
  double worst_k = 0.0, worst_n = 0.0;
  for (int i = 0; i < c.grid.count; ++i) {
    // signed curvature law alpha'(s) = 0.3 cos(s)
    const double exact = 0.3 * std::cos(c.grid.node(i));
    worst_k = std::max(worst_k, std::abs(res.frame.k.at(i)[0] - exact));
    for (int q = 0; q < 2; ++q)
      worst_n = std::max(worst_n,
                         std::abs(res.frame.normal(0, i)[q] -
                                  fr2.normal[static_cast<std::size_t>(i) * 2 + q]));
    worst_k = std::max(worst_k, std::abs(fr2.signed_curvature[i] - exact));
  }
  CHECK(worst_k < 5e-6);
  CHECK(worst_n < 1e-8);
}

TEST_CASE("initial data validation") {
  const auto c = helix_curve(5.0, 501);
  std::vector<double> bad = {1, 0, 0, 0, 1, 0};  // first row not normal to T
  CHECK_THROWS(build_rpaf(c, bad, 0));
  const auto plan = build_rpaf(c, default_initial_normals(c, 250), 250).plan;
  CHECK(!plan.segments.empty());
  CHECK(!chart_plan_json(plan).empty());
}
