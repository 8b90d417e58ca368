#include "strips/curves.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "strips/frames.hpp"
#include "strips/io.hpp"

namespace strips {

namespace {

void mgs_rows(std::vector<double>& rows, int nrows, int dim) {
  for (int r = 0; r < nrows; ++r) {
    double* vr = rows.data() + static_cast<std::size_t>(r) * dim;
    for (int p = 0; p < r; ++p) {
      const double* vp = rows.data() + static_cast<std::size_t>(p) * dim;
      double proj = 0.0;
      for (int c = 0; c < dim; ++c) proj += vr[c] * vp[c];
      for (int c = 0; c < dim; ++c) vr[c] -= proj * vp[c];
    }
    double nrm = 0.0;
    for (int c = 0; c < dim; ++c) nrm += vr[c] * vr[c];
    nrm = std::sqrt(nrm);
    if (nrm < 1e-14) throw std::runtime_error("frame row degenerated during orthonormalization");
    for (int c = 0; c < dim; ++c) vr[c] /= nrm;
  }
}

}  // namespace

bool SGrid::same_as(const SGrid& o, double tol) const {
  return count == o.count && std::abs(s0 - o.s0) <= tol && std::abs(ds - o.ds) <= tol;
}

void SGrid::validate() const {
  if (!(ds > 0.0)) throw std::invalid_argument("SGrid: ds must be positive");
  if (count < 2) throw std::invalid_argument("SGrid: count must be >= 2");
}

double Curve::max_tangent_norm_defect() const {
  double worst = 0.0;
  for (int i = 0; i < grid.count; ++i) {
    double nrm = 0.0;
    const double* t = tangent(i);
    for (int c = 0; c < dim; ++c) nrm += t[c] * t[c];
    worst = std::max(worst, std::abs(std::sqrt(nrm) - 1.0));
  }
  return worst;
}

double Curve::max_tangent_consistency_defect() const {
  double worst = 0.0;
  for (int i = 1; i + 1 < grid.count; ++i) {
    const double* pm = point(i - 1);
    const double* pp = point(i + 1);
    const double* t = tangent(i);
    for (int c = 0; c < dim; ++c) {
      const double fd = (pp[c] - pm[c]) / (2.0 * grid.ds);
      worst = std::max(worst, std::abs(fd - t[c]));
    }
  }
  return worst;
}

void Curve::validate(double tol) const {
  grid.validate();
  if (dim < 2) throw std::invalid_argument("Curve: dim must be >= 2");
  const auto nodes = static_cast<std::size_t>(grid.count);
  if (points.size() != nodes * dim || tangents.size() != nodes * dim)
    throw std::invalid_argument("Curve: sample array size mismatch");
  if (max_tangent_norm_defect() > tol)
    throw std::invalid_argument("Curve: tangents are not unit vectors (not arc-length)");
}

double CurvatureVector::norm_at(int i) const {
  double s = 0.0;
  const double* ki = at(i);
  for (int j = 0; j < n; ++j) s += ki[j] * ki[j];
  return std::sqrt(s);
}

void CurvatureVector::validate() const {
  grid.validate();
  if (n < 1) throw std::invalid_argument("CurvatureVector: n must be >= 1");
  if (k.size() != static_cast<std::size_t>(grid.count) * n)
    throw std::invalid_argument("CurvatureVector: sample array size mismatch");
  for (double v : k)
    if (!std::isfinite(v)) throw std::invalid_argument("CurvatureVector: non-finite entry");
}

CurveFamily curve_family_from_string(const std::string& name) {
  if (name == "line") return CurveFamily::line;
  if (name == "circle") return CurveFamily::circle;
  if (name == "helix") return CurveFamily::helix;
  throw std::invalid_argument("unknown curve family: " + name);
}

Curve make_analytic_curve(CurveFamily family, const std::map<std::string, double>& params,
                          int dim, const SGrid& grid) {
  grid.validate();
  if (dim < 2) throw std::invalid_argument("make_analytic_curve: dim must be >= 2");

  auto param = [&](const std::string& key) {
    auto it = params.find(key);
    if (it == params.end())
      throw std::invalid_argument("make_analytic_curve: missing parameter " + key);
    return it->second;
  };

  Curve c;
  c.dim = dim;
  c.grid = grid;
  c.points.assign(static_cast<std::size_t>(grid.count) * dim, 0.0);
  c.tangents.assign(static_cast<std::size_t>(grid.count) * dim, 0.0);

  switch (family) {
    case CurveFamily::line: {
      for (int i = 0; i < grid.count; ++i) {
        c.points[static_cast<std::size_t>(i) * dim] = grid.node(i);
        c.tangents[static_cast<std::size_t>(i) * dim] = 1.0;
      }
      break;
    }
    case CurveFamily::circle: {
      const double r = param("radius");
      if (!(r > 0.0)) throw std::invalid_argument("circle: radius must be positive");
      for (int i = 0; i < grid.count; ++i) {
        const double phi = grid.node(i) / r;
        double* p = c.points.data() + static_cast<std::size_t>(i) * dim;
        double* t = c.tangents.data() + static_cast<std::size_t>(i) * dim;
        p[0] = r * std::cos(phi);
        p[1] = r * std::sin(phi);
        t[0] = -std::sin(phi);
        t[1] = std::cos(phi);
      }
      break;
    }
    case CurveFamily::helix: {
      if (dim < 3) throw std::invalid_argument("helix: dim must be >= 3");
      const double r = param("radius");
      const double h = param("pitch");
      if (!(r > 0.0)) throw std::invalid_argument("helix: radius must be positive");
      const double cnorm = std::sqrt(r * r + h * h);
      for (int i = 0; i < grid.count; ++i) {
        const double u = grid.node(i) / cnorm;
        double* p = c.points.data() + static_cast<std::size_t>(i) * dim;
        double* t = c.tangents.data() + static_cast<std::size_t>(i) * dim;
        p[0] = r * std::cos(u);
        p[1] = r * std::sin(u);
        p[2] = h * u;
        t[0] = -(r / cnorm) * std::sin(u);
        t[1] = (r / cnorm) * std::cos(u);
        t[2] = h / cnorm;
      }
      break;
    }
  }
  return c;
}

std::vector<double> curvature_of(const Curve& curve) {
  curve.validate();
  const int count = curve.grid.count;
  if (count < 3) throw std::invalid_argument("curvature_of: needs at least 3 nodes");
  const int dim = curve.dim;
  const double ds = curve.grid.ds;

  std::vector<double> kappa(count, 0.0);
  auto accum = [&](int i, auto&& deriv) {
    double s = 0.0;
    for (int c = 0; c < dim; ++c) {
      const double d = deriv(c);
      s += d * d;
    }
    kappa[i] = std::sqrt(s);
  };

  for (int i = 1; i + 1 < count; ++i) {
    const double* tm = curve.tangent(i - 1);
    const double* tp = curve.tangent(i + 1);
    accum(i, [&](int c) { return (tp[c] - tm[c]) / (2.0 * ds); });
  }
  {
    const double* t0 = curve.tangent(0);
    const double* t1 = curve.tangent(1);
    const double* t2 = curve.tangent(2);
    accum(0, [&](int c) { return (-3.0 * t0[c] + 4.0 * t1[c] - t2[c]) / (2.0 * ds); });
    const double* u0 = curve.tangent(count - 1);
    const double* u1 = curve.tangent(count - 2);
    const double* u2 = curve.tangent(count - 3);
    accum(count - 1, [&](int c) { return (3.0 * u0[c] - 4.0 * u1[c] + u2[c]) / (2.0 * ds); });
  }
  return kappa;
}

std::pair<Curve, Frame> synthesize_from_curvature(const CurvatureVector& kv,
                                                  const std::vector<double>& initial_frame,
                                                  const std::vector<double>& origin) {
  kv.validate();
  const int n = kv.n;
  const int dim = n + 1;
  const int count = kv.grid.count;
  const double ds = kv.grid.ds;
  if (initial_frame.size() != static_cast<std::size_t>(dim) * dim)
    throw std::invalid_argument("synthesize_from_curvature: initial frame size mismatch");
  if (origin.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("synthesize_from_curvature: origin size mismatch");

  // initial frame rows orthonormal within 1e-12
  for (int r = 0; r < dim; ++r)
    for (int q = 0; q <= r; ++q) {
      double g = 0.0;
      for (int c = 0; c < dim; ++c)
        g += initial_frame[static_cast<std::size_t>(r) * dim + c] *
             initial_frame[static_cast<std::size_t>(q) * dim + c];
      const double want = (r == q) ? 1.0 : 0.0;
      if (std::abs(g - want) > 1e-12)
        throw std::invalid_argument("synthesize_from_curvature: initial frame not orthonormal");
    }

  Curve curve;
  curve.dim = dim;
  curve.grid = kv.grid;
  curve.points.assign(static_cast<std::size_t>(count) * dim, 0.0);
  curve.tangents.assign(static_cast<std::size_t>(count) * dim, 0.0);

  Frame frame;
  frame.grid = kv.grid;
  frame.dim = dim;
  frame.T.assign(static_cast<std::size_t>(count) * dim, 0.0);
  frame.N.assign(n, std::vector<double>(static_cast<std::size_t>(count) * dim, 0.0));
  frame.k = kv;

  // State: Y rows (T, N_1..N_n) plus position. Y' = A(s) Y, p' = T with
  // A = [[0, k^T], [-k, 0]].
  std::vector<double> Y = initial_frame;
  std::vector<double> pos = origin;

  auto k_at = [&](double s) {
    // piecewise linear in s between nodes
    double x = (s - kv.grid.s0) / ds;
    if (x <= 0.0) x = 0.0;
    if (x >= count - 1) x = count - 1;
    const int i0 = std::min(static_cast<int>(x), count - 2);
    const double w = x - i0;
    std::vector<double> k(n);
    const double* a = kv.at(i0);
    const double* b = kv.at(i0 + 1);
    for (int j = 0; j < n; ++j) k[j] = (1.0 - w) * a[j] + w * b[j];
    return k;
  };

  auto rhs = [&](const std::vector<double>& y, const std::vector<double>& k,
                 std::vector<double>& dy, std::vector<double>& dp) {
    // dT = sum k_j N_j ; dN_j = -k_j T ; dp = T
    const double* T = y.data();
    for (int c = 0; c < dim; ++c) {
      double dT = 0.0;
      for (int j = 0; j < n; ++j) dT += k[j] * y[static_cast<std::size_t>(j + 1) * dim + c];
      dy[c] = dT;
      dp[c] = T[c];
    }
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < dim; ++c)
        dy[static_cast<std::size_t>(j + 1) * dim + c] = -k[j] * T[c];
  };

  const std::size_t ysz = static_cast<std::size_t>(dim) * dim;
  std::vector<double> k1(ysz), k2(ysz), k3(ysz), k4(ysz);
  std::vector<double> p1(dim), p2(dim), p3(dim), p4(dim);
  std::vector<double> tmp(ysz), ptmp(dim);

  auto store = [&](int i) {
    for (int c = 0; c < dim; ++c) {
      curve.points[static_cast<std::size_t>(i) * dim + c] = pos[c];
      curve.tangents[static_cast<std::size_t>(i) * dim + c] = Y[c];
      frame.T[static_cast<std::size_t>(i) * dim + c] = Y[c];
      for (int j = 0; j < n; ++j)
        frame.N[j][static_cast<std::size_t>(i) * dim + c] =
            Y[static_cast<std::size_t>(j + 1) * dim + c];
    }
  };

  store(0);
  for (int i = 0; i + 1 < count; ++i) {
    const double s = kv.grid.node(i);
    const auto ka = k_at(s);
    const auto km = k_at(s + 0.5 * ds);
    const auto kb = k_at(s + ds);

    rhs(Y, ka, k1, p1);
    for (std::size_t q = 0; q < ysz; ++q) tmp[q] = Y[q] + 0.5 * ds * k1[q];
    rhs(tmp, km, k2, p2);
    for (std::size_t q = 0; q < ysz; ++q) tmp[q] = Y[q] + 0.5 * ds * k2[q];
    rhs(tmp, km, k3, p3);
    for (std::size_t q = 0; q < ysz; ++q) tmp[q] = Y[q] + ds * k3[q];
    rhs(tmp, kb, k4, p4);

    // positions use the same RK4 stage tangents
    (void)ptmp;
    for (int c = 0; c < dim; ++c) {
      const double t1 = Y[c];
      const double t2 = Y[c] + 0.5 * ds * k1[c];
      const double t3 = Y[c] + 0.5 * ds * k2[c];
      const double t4 = Y[c] + ds * k3[c];
      pos[c] += (ds / 6.0) * (t1 + 2.0 * t2 + 2.0 * t3 + t4);
    }
    for (std::size_t q = 0; q < ysz; ++q)
      Y[q] += (ds / 6.0) * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);

    mgs_rows(Y, dim, dim);
    store(i + 1);
  }

  // k reported at nodes is the prescribed input
  return {std::move(curve), std::move(frame)};
}

void write_curve_csv(const Curve& curve, const std::string& path) {
  std::ostringstream header;
  header << "s";
  for (int c = 0; c < curve.dim; ++c) header << ",x" << c;
  for (int c = 0; c < curve.dim; ++c) header << ",t" << c;

  io::Table tab;
  tab.header = header.str();
  for (int i = 0; i < curve.grid.count; ++i) {
    std::vector<double> row;
    row.reserve(1 + 2 * curve.dim);
    row.push_back(curve.grid.node(i));
    for (int c = 0; c < curve.dim; ++c) row.push_back(curve.point(i)[c]);
    for (int c = 0; c < curve.dim; ++c) row.push_back(curve.tangent(i)[c]);
    tab.rows.push_back(std::move(row));
  }
  io::write_csv(tab, path);
}

Curve read_curve_csv(const std::string& path) {
  io::Table tab = io::read_csv(path);
  if (tab.rows.empty()) throw std::runtime_error("curve csv: no rows");
  const std::size_t ncols = tab.rows.front().size();
  if (ncols < 5 || (ncols - 1) % 2 != 0) throw std::runtime_error("curve csv: bad column count");
  const int dim = static_cast<int>((ncols - 1) / 2);

  Curve c;
  c.dim = dim;
  c.grid.count = static_cast<int>(tab.rows.size());
  c.grid.s0 = tab.rows.front()[0];
  c.grid.ds = c.grid.count > 1 ? (tab.rows[1][0] - tab.rows[0][0]) : 1.0;
  c.points.resize(static_cast<std::size_t>(c.grid.count) * dim);
  c.tangents.resize(static_cast<std::size_t>(c.grid.count) * dim);
  for (int i = 0; i < c.grid.count; ++i) {
    const auto& row = tab.rows[i];
    if (row.size() != ncols) throw std::runtime_error("curve csv: ragged rows");
    for (int cc = 0; cc < dim; ++cc) {
      c.points[static_cast<std::size_t>(i) * dim + cc] = row[1 + cc];
      c.tangents[static_cast<std::size_t>(i) * dim + cc] = row[1 + dim + cc];
    }
  }
  return c;
}

}  // namespace strips
