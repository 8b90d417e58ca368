#include "strips/stripgeom.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "strips/io.hpp"
#include "strips/util.hpp"

namespace strips {

// --- profiles ----------------------------------------------------------------

double bump(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

double bump_derivative(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  const double d = 1.0 - x * x;
  return bump(x) * (-2.0 * x / (d * d));
}

double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double q = std::exp(-1.0 / x);
  const double q1 = std::exp(-1.0 / (1.0 - x));
  return q / (q + q1);
}

double mollifier_plateau(double x) { return smoothstep(2.0 - std::abs(x)); }

double mollifier_plateau_derivative(double x) {
  const double ax = std::abs(x);
  if (ax <= 1.0 || ax >= 2.0) return 0.0;
  const double h = 1e-6;
  return (mollifier_plateau(x + h) - mollifier_plateau(x - h)) / (2.0 * h);
}

double Profile::operator()(double s) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::constant:
      return height;
    case Kind::bump:
      return height * bump(2.0 * (s - center) / width);
    case Kind::lorentz: {
      const double d = s - center;
      return height / (1.0 + d * d);
    }
  }
  return 0.0;
}

double Profile::derivative(double s) const {
  switch (kind) {
    case Kind::zero:
    case Kind::constant:
      return 0.0;
    case Kind::bump:
      return height * bump_derivative(2.0 * (s - center) / width) * (2.0 / width);
    case Kind::lorentz: {
      const double d = s - center;
      const double q = 1.0 + d * d;
      return -2.0 * height * d / (q * q);
    }
  }
  return 0.0;
}

double Profile::max_abs() const { return std::abs(height); }

Profile Profile::zero() { return {}; }
Profile Profile::constant(double h) { return {Kind::constant, h, 0.0, 1.0}; }
Profile Profile::bump_profile(double height, double center, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("bump profile: width must be positive");
  return {Kind::bump, height, center, width};
}
Profile Profile::lorentz(double height, double center) {
  return {Kind::lorentz, height, center, 1.0};
}

Profile::Kind Profile::kind_from_string(const std::string& name) {
  if (name == "zero") return Kind::zero;
  if (name == "constant") return Kind::constant;
  if (name == "bump") return Kind::bump;
  if (name == "lorentz") return Kind::lorentz;
  throw std::invalid_argument("unknown profile kind: " + name);
}

// --- twist profiles ----------------------------------------------------------

double TwistProfile::rate_at(int i) const {
  double s = 0.0;
  const double* tp = prime_at(i);
  for (int j = 0; j < n; ++j) s += tp[j] * tp[j];
  return std::sqrt(s);
}

void TwistProfile::validate(double tol) const {
  grid.validate();
  if (n < 1) throw std::invalid_argument("TwistProfile: n must be >= 1");
  if (theta.size() != static_cast<std::size_t>(grid.count) * n ||
      theta_prime.size() != theta.size())
    throw std::invalid_argument("TwistProfile: sample size mismatch");
  for (int i = 0; i < grid.count; ++i) {
    double s = 0.0;
    const double* th = at(i);
    for (int j = 0; j < n; ++j) s += th[j] * th[j];
    if (std::abs(std::sqrt(s) - 1.0) > tol)
      throw std::invalid_argument("TwistProfile: |Theta| must be 1 at every node");
  }
}

TwistProfile TwistProfile::constant(const SGrid& grid, const std::vector<double>& theta0) {
  grid.validate();
  const int n = static_cast<int>(theta0.size());
  double nrm = 0.0;
  for (double v : theta0) nrm += v * v;
  nrm = std::sqrt(nrm);
  if (std::abs(nrm - 1.0) > 1e-9)
    throw std::invalid_argument("TwistProfile::constant: theta0 must be unit");
  TwistProfile t;
  t.grid = grid;
  t.n = n;
  t.theta.resize(static_cast<std::size_t>(grid.count) * n);
  t.theta_prime.assign(static_cast<std::size_t>(grid.count) * n, 0.0);
  for (int i = 0; i < grid.count; ++i)
    for (int j = 0; j < n; ++j) t.theta[static_cast<std::size_t>(i) * n + j] = theta0[j];
  return t;
}

TwistProfile TwistProfile::rotation(const SGrid& grid, int n, int j1, int j2, double omega,
                                    double phase0) {
  grid.validate();
  if (n < 2 || j1 < 0 || j2 < 0 || j1 >= n || j2 >= n || j1 == j2)
    throw std::invalid_argument("TwistProfile::rotation: bad plane indices");
  TwistProfile t;
  t.grid = grid;
  t.n = n;
  t.theta.assign(static_cast<std::size_t>(grid.count) * n, 0.0);
  t.theta_prime.assign(static_cast<std::size_t>(grid.count) * n, 0.0);
  for (int i = 0; i < grid.count; ++i) {
    const double phi = phase0 + omega * (grid.node(i) - grid.s0);
    t.theta[static_cast<std::size_t>(i) * n + j1] = std::cos(phi);
    t.theta[static_cast<std::size_t>(i) * n + j2] = std::sin(phi);
    t.theta_prime[static_cast<std::size_t>(i) * n + j1] = -omega * std::sin(phi);
    t.theta_prime[static_cast<std::size_t>(i) * n + j2] = omega * std::cos(phi);
  }
  return t;
}

TwistProfile TwistProfile::bump_rotation(const SGrid& grid, int n, int j1, int j2, double height,
                                         double center, double width, double phase0) {
  grid.validate();
  if (n < 2 || j1 < 0 || j2 < 0 || j1 >= n || j2 >= n || j1 == j2)
    throw std::invalid_argument("TwistProfile::bump_rotation: bad plane indices");
  const Profile rate = Profile::bump_profile(height, center, width);
  // angle = primitive of the rate, composite Simpson per grid cell
  std::vector<double> phi(grid.count, phase0);
  for (int i = 1; i < grid.count; ++i) {
    const double a = grid.node(i - 1), b = grid.node(i);
    const double m = 0.5 * (a + b);
    phi[i] = phi[i - 1] + (b - a) / 6.0 * (rate(a) + 4.0 * rate(m) + rate(b));
  }
  TwistProfile t;
  t.grid = grid;
  t.n = n;
  t.theta.assign(static_cast<std::size_t>(grid.count) * n, 0.0);
  t.theta_prime.assign(static_cast<std::size_t>(grid.count) * n, 0.0);
  for (int i = 0; i < grid.count; ++i) {
    const double w = rate(grid.node(i));
    t.theta[static_cast<std::size_t>(i) * n + j1] = std::cos(phi[i]);
    t.theta[static_cast<std::size_t>(i) * n + j2] = std::sin(phi[i]);
    t.theta_prime[static_cast<std::size_t>(i) * n + j1] = -w * std::sin(phi[i]);
    t.theta_prime[static_cast<std::size_t>(i) * n + j2] = w * std::cos(phi[i]);
  }
  return t;
}

TwistProfile TwistProfile::from_samples(const SGrid& grid, int n, std::vector<double> samples) {
  grid.validate();
  if (samples.size() != static_cast<std::size_t>(grid.count) * n)
    throw std::invalid_argument("TwistProfile::from_samples: size mismatch");
  double worst = 0.0;
  for (int i = 0; i < grid.count; ++i) {
    double nrm = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = samples[static_cast<std::size_t>(i) * n + j];
      nrm += v * v;
    }
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12)
      throw std::invalid_argument("TwistProfile::from_samples: zero vector at a node");
    worst = std::max(worst, std::abs(nrm - 1.0));
    for (int j = 0; j < n; ++j) samples[static_cast<std::size_t>(i) * n + j] /= nrm;
  }
  if (worst > 1e-6)
    std::cerr << "warning: twist samples renormalized by up to " << worst << "\n";

  TwistProfile t;
  t.grid = grid;
  t.n = n;
  t.theta = std::move(samples);
  t.theta_prime.assign(t.theta.size(), 0.0);
  const double ds = grid.ds;
  for (int i = 0; i < grid.count; ++i)
    for (int j = 0; j < n; ++j) {
      double d;
      if (i > 0 && i + 1 < grid.count)
        d = (t.theta[static_cast<std::size_t>(i + 1) * n + j] -
             t.theta[static_cast<std::size_t>(i - 1) * n + j]) /
            (2.0 * ds);
      else if (i == 0)
        d = (t.theta[static_cast<std::size_t>(1) * n + j] - t.theta[j]) / ds;
      else
        d = (t.theta[static_cast<std::size_t>(i) * n + j] -
             t.theta[static_cast<std::size_t>(i - 1) * n + j]) /
            ds;
      t.theta_prime[static_cast<std::size_t>(i) * n + j] = d;
    }
  return t;
}

// --- strip model ---------------------------------------------------------

namespace {
double interp(const SGrid& grid, const std::vector<double>& samples, double s) {
  double x = (s - grid.s0) / grid.ds;
  if (x <= 0.0) return samples.front();
  if (x >= grid.count - 1) return samples.back();
  const int i0 = std::min(static_cast<int>(x), grid.count - 2);
  const double w = x - i0;
  return (1.0 - w) * samples[i0] + w * samples[i0 + 1];
}
}  // namespace

double StripModel::kdot_at(double s) const {
  return kdot_fn ? kdot_fn(s) : interp(grid, kdotTheta, s);
}

double StripModel::rate_at(double s) const {
  return rate_fn ? rate_fn(s) : interp(grid, absThetaPrime, s);
}

double StripModel::max_abs_kdot() const {
  double m = 0.0;
  for (double v : kdotTheta) m = std::max(m, std::abs(v));
  return m;
}

double StripModel::max_rate() const {
  double m = 0.0;
  for (double v : absThetaPrime) m = std::max(m, std::abs(v));
  return m;
}

double StripModel::f_at(double s, double t) const {
  const double g = kdot_at(s);
  const double b = rate_at(s);
  const double u = 1.0 - t * g;
  return std::sqrt(u * u + t * t * b * b);
}

StripModel StripModel::direct(const SGrid& grid, double a, const Profile& kdot,
                              const Profile& rate) {
  grid.validate();
  if (!(a > 0.0)) throw std::invalid_argument("StripModel: a must be positive");
  StripModel m;
  m.a = a;
  m.grid = grid;
  m.provenance = StripProvenance::direct_profiles;
  m.kdotTheta.resize(grid.count);
  m.absThetaPrime.resize(grid.count);
  for (int i = 0; i < grid.count; ++i) {
    m.kdotTheta[i] = kdot(grid.node(i));
    m.absThetaPrime[i] = std::abs(rate(grid.node(i)));
  }
  m.kdot_fn = [kdot](double s) { return kdot(s); };
  m.rate_fn = [rate](double s) { return std::abs(rate(s)); };
  const double bound = a * m.max_abs_kdot();
  if (!(bound < 1.0)) {
    long worst = 0;
    for (int i = 0; i < grid.count; ++i)
      if (std::abs(m.kdotTheta[i]) >= std::abs(m.kdotTheta[worst])) worst = i;
    throw AssumptionError("ass21", "a*max|k.Theta| = " + std::to_string(bound) + " >= 1", worst);
  }
  return m;
}

StripModel StripModel::from_samples(const SGrid& grid, double a, std::vector<double> kdot,
                                    std::vector<double> rate) {
  grid.validate();
  if (!(a > 0.0)) throw std::invalid_argument("StripModel: a must be positive");
  if (kdot.size() != static_cast<std::size_t>(grid.count) || rate.size() != kdot.size())
    throw std::invalid_argument("StripModel: sample size mismatch");
  StripModel m;
  m.a = a;
  m.grid = grid;
  m.provenance = StripProvenance::direct_profiles;
  m.kdotTheta = std::move(kdot);
  m.absThetaPrime = std::move(rate);
  const double bound = a * m.max_abs_kdot();
  if (!(bound < 1.0)) {
    long worst = 0;
    for (int i = 0; i < grid.count; ++i)
      if (std::abs(m.kdotTheta[i]) >= std::abs(m.kdotTheta[worst])) worst = i;
    throw AssumptionError("ass21", "a*max|k.Theta| = " + std::to_string(bound) + " >= 1", worst);
  }
  return m;
}

StripModel make_strip(const Frame& frame, const TwistProfile& twist, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("make_strip: a must be positive");
  if (!frame.grid.same_as(twist.grid) || frame.n() != twist.n)
    throw std::invalid_argument("make_strip: frame and twist grids do not match");
  twist.validate();

  const int count = frame.grid.count;
  const int n = frame.n();
  std::vector<double> kdot(count), rate(count);
  for (int i = 0; i < count; ++i) {
    const double* k = frame.k.at(i);
    const double* th = twist.at(i);
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += k[j] * th[j];
    kdot[i] = s;
    rate[i] = twist.rate_at(i);
  }

  double bound = 0.0;
  long worst = 0;
  for (int i = 0; i < count; ++i)
    if (std::abs(kdot[i]) > std::abs(kdot[worst])) worst = i;
  bound = a * std::abs(kdot[worst]);
  if (!(bound < 1.0))
    throw AssumptionError("ass21", "a*max|k.Theta| = " + std::to_string(bound) + " >= 1", worst);

  StripModel m;
  m.a = a;
  m.grid = frame.grid;
  m.kdotTheta = std::move(kdot);
  m.absThetaPrime = std::move(rate);
  m.provenance = StripProvenance::from_frame_and_twist;
  return m;
}

double jacobian_f(const StripModel& model, int s_index, double t) {
  if (std::abs(t) > model.a) throw std::invalid_argument("jacobian_f: |t| > a");
  const double g = model.kdotTheta[s_index];
  const double b = model.absThetaPrime[s_index];
  const double u = 1.0 - t * g;
  return std::sqrt(u * u + t * t * b * b);
}

double gauss_curvature(const StripModel& model, int s_index, double t) {
  if (std::abs(t) > model.a) throw std::invalid_argument("gauss_curvature: |t| > a");
  const double f = jacobian_f(model, s_index, t);
  const double b = model.absThetaPrime[s_index];
  return -(b * b) / (f * f * f * f);
}

AssumptionReport validate_assumptions(const StripModel& model, double flat_threshold) {
  AssumptionReport r;
  r.flat_threshold = flat_threshold;
  const int count = model.grid.count;
  const double ds = model.grid.ds;

  r.sup_kdot = model.max_abs_kdot();
  r.sup_rate = model.max_rate();

  r.ass21_ok = model.a * r.sup_kdot < 1.0;
  if (!r.ass21_ok)
    for (int i = 0; i < count; ++i)
      if (model.a * std::abs(model.kdotTheta[i]) >= 1.0) r.ass21_witnesses.push_back(i);

  r.hardy_smallness_ok = model.a * r.sup_rate <= std::sqrt(2.0) + 1e-12;
  if (!r.hardy_smallness_ok)
    for (int i = 0; i < count; ++i)
      if (model.a * model.absThetaPrime[i] > std::sqrt(2.0) + 1e-12)
        r.hardy_witnesses.push_back(i);

  // decay over the outer 10% of the window
  const int tail = std::max(1, count / 10);
  r.asymptotically_flat_ok = true;
  for (int i = 0; i < count; ++i) {
    if (i >= tail && i < count - tail) continue;
    if (std::abs(model.kdotTheta[i]) > flat_threshold ||
        model.absThetaPrime[i] > flat_threshold) {
      r.asymptotically_flat_ok = false;
      r.flat_witnesses.push_back(i);
    }
  }

  // thin-limit boundedness: finite profiles and finite FD derivatives
  r.thin_ass_ok = true;
  for (int i = 0; i < count; ++i) {
    double dk = 0.0, dr = 0.0;
    if (i > 0 && i + 1 < count) {
      dk = (model.kdotTheta[i + 1] - model.kdotTheta[i - 1]) / (2.0 * ds);
      dr = (model.absThetaPrime[i + 1] - model.absThetaPrime[i - 1]) / (2.0 * ds);
    }
    const bool ok = std::isfinite(model.kdotTheta[i]) && std::isfinite(model.absThetaPrime[i]) &&
                    std::isfinite(dk) && std::isfinite(dr);
    if (!ok) {
      r.thin_ass_ok = false;
      r.thin_witnesses.push_back(i);
    }
    r.sup_kdot_prime = std::max(r.sup_kdot_prime, std::abs(dk));
    r.sup_rate_prime = std::max(r.sup_rate_prime, std::abs(dr));
  }
  if (!(model.a * r.sup_kdot < 1.0)) r.thin_ass_ok = false;
  return r;
}

std::string assumption_report_json(const AssumptionReport& r) {
  auto witness_list = [](const std::vector<long>& w) {
    std::ostringstream os;
    os << "[";
    const std::size_t cap = std::min<std::size_t>(w.size(), 32);
    for (std::size_t i = 0; i < cap; ++i) {
      if (i) os << ",";
      os << w[i];
    }
    os << "]";
    return os.str();
  };
  std::ostringstream os;
  os << "{";
  os << "\"assumption_2_1_ok\":" << (r.ass21_ok ? "true" : "false");
  os << ",\"hardy_smallness_ok\":" << (r.hardy_smallness_ok ? "true" : "false");
  os << ",\"asymptotically_flat_ok\":" << (r.asymptotically_flat_ok ? "true" : "false");
  os << ",\"thin_assumption_ok\":" << (r.thin_ass_ok ? "true" : "false");
  os << ",\"witnesses\":{";
  os << "\"assumption_2_1\":" << witness_list(r.ass21_witnesses);
  os << ",\"hardy_smallness\":" << witness_list(r.hardy_witnesses);
  os << ",\"asymptotically_flat\":" << witness_list(r.flat_witnesses);
  os << ",\"thin_assumption\":" << witness_list(r.thin_witnesses);
  os << "}";
  os << ",\"sup_kdot_theta\":" << io::format_g17(r.sup_kdot);
  os << ",\"sup_theta_prime\":" << io::format_g17(r.sup_rate);
  os << ",\"sup_kdot_theta_prime\":" << io::format_g17(r.sup_kdot_prime);
  os << ",\"sup_theta_second\":" << io::format_g17(r.sup_rate_prime);
  os << ",\"flat_threshold\":" << io::format_g17(r.flat_threshold);
  os << "}";
  return os.str();
}

EmbeddedStrip embed(const StripModel& model, const Curve& curve, const Frame& frame,
                    const TwistProfile& twist, int t_samples) {
  if (t_samples < 2) throw std::invalid_argument("embed: t_samples must be >= 2");
  if (!curve.grid.same_as(frame.grid) || !curve.grid.same_as(twist.grid) ||
      !curve.grid.same_as(model.grid))
    throw std::invalid_argument("embed: grids do not match");
  const int dim = curve.dim;
  const int n = frame.n();
  const int count = curve.grid.count;

  EmbeddedStrip out;
  out.dim = dim;
  out.ns = count;
  out.nt = t_samples;
  out.s.reserve(static_cast<std::size_t>(count) * t_samples);
  out.t.reserve(out.s.capacity());
  out.points.reserve(out.s.capacity() * dim);

  std::vector<double> ntheta(dim);
  for (int i = 0; i < count; ++i) {
    const double* th = twist.at(i);
    std::fill(ntheta.begin(), ntheta.end(), 0.0);
    for (int j = 0; j < n; ++j) {
      const double* nv = frame.normal(j, i);
      for (int c = 0; c < dim; ++c) ntheta[c] += th[j] * nv[c];
    }
    for (int m = 0; m < t_samples; ++m) {
      const double t = -model.a + 2.0 * model.a * m / (t_samples - 1);
      out.s.push_back(curve.grid.node(i));
      out.t.push_back(t);
      const double* p = curve.point(i);
      for (int c = 0; c < dim; ++c) out.points.push_back(p[c] + ntheta[c] * t);
    }
  }
  return out;
}

InjectivityReport check_injectivity(const EmbeddedStrip& pts, double min_separation,
                                    double param_factor) {
  InjectivityReport rep;
  rep.min_separation = min_separation;
  rep.closest_offending = std::numeric_limits<double>::infinity();
  const std::size_t npts = pts.s.size();
  if (npts < 2) return rep;

  double ds_step = std::numeric_limits<double>::infinity();
  double dt_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < npts; ++i) {
    const double dsv = std::abs(pts.s[i] - pts.s[i - 1]);
    const double dtv = std::abs(pts.t[i] - pts.t[i - 1]);
    if (dsv > 0) ds_step = std::min(ds_step, dsv);
    if (dtv > 0) dt_step = std::min(dt_step, dtv);
  }
  const double sep2 = min_separation * min_separation;

  for (std::size_t i = 0; i < npts; ++i) {
    for (std::size_t j = i + 1; j < npts; ++j) {
      const double dpar = std::max(std::abs(pts.s[i] - pts.s[j]) / ds_step,
                                   std::abs(pts.t[i] - pts.t[j]) / dt_step);
      if (dpar <= param_factor) continue;
      double d2 = 0.0;
      for (int c = 0; c < pts.dim; ++c) {
        const double d = pts.points[i * pts.dim + c] - pts.points[j * pts.dim + c];
        d2 += d * d;
      }
      if (d2 < sep2) {
        rep.flags.push_back({static_cast<int>(i), static_cast<int>(j), std::sqrt(d2)});
        rep.closest_offending = std::min(rep.closest_offending, std::sqrt(d2));
      }
    }
  }
  return rep;
}

void write_surface_csv(const EmbeddedStrip& strip, const std::string& path) {
  std::ostringstream header;
  header << "s,t";
  for (int c = 0; c < strip.dim; ++c) header << ",x" << c;
  io::Table tab;
  tab.header = header.str();
  for (std::size_t i = 0; i < strip.s.size(); ++i) {
    std::vector<double> row;
    row.push_back(strip.s[i]);
    row.push_back(strip.t[i]);
    for (int c = 0; c < strip.dim; ++c) row.push_back(strip.points[i * strip.dim + c]);
    tab.rows.push_back(std::move(row));
  }
  io::write_csv(tab, path);
}

void write_surface_obj(const EmbeddedStrip& strip, const std::string& path) {
  if (strip.dim != 3) throw std::invalid_argument("write_surface_obj: dim must be 3");
  std::ostringstream os;
  for (std::size_t i = 0; i < strip.s.size(); ++i)
    os << "v " << io::format_g17(strip.points[i * 3]) << " "
       << io::format_g17(strip.points[i * 3 + 1]) << " "
       << io::format_g17(strip.points[i * 3 + 2]) << "\n";
  // quad (i,m)-(i+1,m)-(i+1,m+1)-(i,m+1) split into two triangles
  auto vid = [&](int i, int m) { return i * strip.nt + m + 1; };  // 1-based
  for (int i = 0; i + 1 < strip.ns; ++i)
    for (int m = 0; m + 1 < strip.nt; ++m) {
      os << "f " << vid(i, m) << " " << vid(i + 1, m) << " " << vid(i + 1, m + 1) << "\n";
      os << "f " << vid(i, m) << " " << vid(i + 1, m + 1) << " " << vid(i, m + 1) << "\n";
    }
  io::write_text_atomic(path, os.str());
}

}  // namespace strips
