#include "strips/discretize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "strips/io.hpp"
#include "strips/util.hpp"

namespace strips {

void Mesh2D::validate() const {
  if (!(S > 0.0) || !(a > 0.0)) throw std::invalid_argument("Mesh2D: S and a must be positive");
  if (ns < 4 || nt < 4) throw std::invalid_argument("Mesh2D: ns and nt must be >= 4");
}

void Mesh1D::validate() const {
  if (!(x1 > x0)) throw std::invalid_argument("Mesh1D: empty interval");
  if (n < 2) throw std::invalid_argument("Mesh1D: n must be >= 2");
}

namespace {

void require_window(const StripModel& model, double s_lo, double s_hi) {
  if (model.grid.s0 > s_lo + 1e-12 || model.grid.s_end() < s_hi - 1e-12)
    throw std::invalid_argument("model window smaller than mesh");
}

void require_ass21(const StripModel& model) {
  const double bound = model.a * model.max_abs_kdot();
  if (!(bound < 1.0))
    throw AssumptionError("ass21", "a*max|k.Theta| = " + std::to_string(bound) + " >= 1");
}

}  // namespace

DiscreteForm assemble_2d(const StripModel& model, const Mesh2D& mesh, EndCondition ends) {
  mesh.validate();
  require_window(model, -mesh.S, mesh.S);
  require_ass21(model);
  if (std::abs(mesh.a - model.a) > 1e-12)
    throw std::invalid_argument("assemble_2d: mesh half-width differs from model");

  const double hs = mesh.hs(), ht = mesh.ht();
  const int nt = mesh.nt;
  const bool dirichlet = ends == EndCondition::dirichlet;
  const int scount = dirichlet ? mesh.ns : mesh.ns + 2;
  const int n_unknown = scount * nt;

  auto s_of = [&](int i) { return -mesh.S + (i + (dirichlet ? 1 : 0)) * hs; };
  auto t_of = [&](int m) { return -mesh.a + (m + 1) * ht; };
  auto idx = [&](int i, int m) { return i * nt + m; };

  std::vector<linalg::Triplet> trips;
  trips.reserve(static_cast<std::size_t>(n_unknown) * 5);

  // s-direction edges between columns i and i+1 (plus the Dirichlet boundary
  // half-edges when ends are clamped)
  const int first_edge = dirichlet ? -1 : 0;             // edge (i, i+1)
  const int last_edge = dirichlet ? mesh.ns - 1 : mesh.ns;  // inclusive
  for (int i = first_edge; i <= last_edge; ++i) {
    const double smid = s_of(i) + 0.5 * hs;
    for (int m = 0; m < nt; ++m) {
      const double c = (ht / hs) / model.f_at(smid, t_of(m));
      const bool a_in = i >= 0;
      const bool b_in = i + 1 < scount;
      if (a_in) trips.push_back({idx(i, m), idx(i, m), c});
      if (b_in) trips.push_back({idx(i + 1, m), idx(i + 1, m), c});
      if (a_in && b_in) {
        trips.push_back({idx(i, m), idx(i + 1, m), -c});
        trips.push_back({idx(i + 1, m), idx(i, m), -c});
      }
    }
  }

  // t-direction edges; t = +-a rows are always Dirichlet
  for (int i = 0; i < scount; ++i) {
    const double s = s_of(i);
    for (int m = -1; m <= nt - 1; ++m) {
      const double tmid = t_of(m) + 0.5 * ht;
      const double c = (hs / ht) * model.f_at(s, tmid);
      const bool a_in = m >= 0;
      const bool b_in = m + 1 < nt;
      if (a_in) trips.push_back({idx(i, m), idx(i, m), c});
      if (b_in) trips.push_back({idx(i, m + 1), idx(i, m + 1), c});
      if (a_in && b_in) {
        trips.push_back({idx(i, m), idx(i, m + 1), -c});
        trips.push_back({idx(i, m + 1), idx(i, m), -c});
      }
    }
  }

  DiscreteForm form;
  form.K = linalg::CsrMatrix::from_triplets(n_unknown, n_unknown, std::move(trips));
  form.mass.resize(n_unknown);
  for (int i = 0; i < scount; ++i)
    for (int m = 0; m < nt; ++m) form.mass[idx(i, m)] = model.f_at(s_of(i), t_of(m)) * hs * ht;
  form.end_condition = ends;
  form.S = mesh.S;
  form.a = mesh.a;
  form.ns = mesh.ns;
  form.nt = nt;
  form.hs = hs;
  form.ht = ht;
  return form;
}

linalg::CsrMatrix assemble_2d_transverse_only(const StripModel& model, const Mesh2D& mesh,
                                              EndCondition ends) {
  mesh.validate();
  require_window(model, -mesh.S, mesh.S);
  const double hs = mesh.hs(), ht = mesh.ht();
  const int nt = mesh.nt;
  const bool dirichlet = ends == EndCondition::dirichlet;
  const int scount = dirichlet ? mesh.ns : mesh.ns + 2;
  auto s_of = [&](int i) { return -mesh.S + (i + (dirichlet ? 1 : 0)) * hs; };
  auto t_of = [&](int m) { return -mesh.a + (m + 1) * ht; };
  auto idx = [&](int i, int m) { return i * nt + m; };

  std::vector<linalg::Triplet> trips;
  for (int i = 0; i < scount; ++i) {
    const double s = s_of(i);
    for (int m = -1; m <= nt - 1; ++m) {
      const double c = (hs / ht) * model.f_at(s, t_of(m) + 0.5 * ht);
      const bool a_in = m >= 0;
      const bool b_in = m + 1 < nt;
      if (a_in) trips.push_back({idx(i, m), idx(i, m), c});
      if (b_in) trips.push_back({idx(i, m + 1), idx(i, m + 1), c});
      if (a_in && b_in) {
        trips.push_back({idx(i, m), idx(i, m + 1), -c});
        trips.push_back({idx(i, m + 1), idx(i, m), -c});
      }
    }
  }
  return linalg::CsrMatrix::from_triplets(scount * nt, scount * nt, std::move(trips));
}

DiscreteForm assemble_transverse_1d(const StripModel& model, int s_index, int nt,
                                    TransverseFormulation formulation) {
  if (s_index < 0 || s_index >= model.grid.count)
    throw std::invalid_argument("assemble_transverse_1d: s_index out of range");
  if (nt < 4) throw std::invalid_argument("assemble_transverse_1d: nt must be >= 4");
  const double a = model.a;
  const double ht = 2.0 * a / (nt + 1);
  const double g = model.kdotTheta[s_index];
  const double beta = model.absThetaPrime[s_index];
  if (formulation == TransverseFormulation::potential && std::abs(g) > 1e-12)
    throw std::invalid_argument(
        "assemble_transverse_1d: potential formulation requires k.Theta = 0 at the node");

  auto fval = [&](double t) {
    const double u = 1.0 - t * g;
    return std::sqrt(u * u + t * t * beta * beta);
  };
  auto t_of = [&](int m) { return -a + (m + 1) * ht; };

  std::vector<linalg::Triplet> trips;
  trips.reserve(static_cast<std::size_t>(nt) * 3 + 2);
  for (int m = -1; m <= nt - 1; ++m) {
    const double tmid = t_of(m) + 0.5 * ht;
    const double w = formulation == TransverseFormulation::weighted ? fval(tmid) : 1.0;
    const double c = w / ht;
    const bool a_in = m >= 0;
    const bool b_in = m + 1 < nt;
    if (a_in) trips.push_back({m, m, c});
    if (b_in) trips.push_back({m + 1, m + 1, c});
    if (a_in && b_in) {
      trips.push_back({m, m + 1, -c});
      trips.push_back({m + 1, m, -c});
    }
  }

  DiscreteForm form;
  form.mass.resize(nt);
  if (formulation == TransverseFormulation::weighted) {
    for (int m = 0; m < nt; ++m) form.mass[m] = fval(t_of(m)) * ht;
  } else {
    const double b2 = beta * beta;
    for (int m = 0; m < nt; ++m) {
      const double t = t_of(m);
      const double f = fval(t);
      const double V = b2 * (2.0 - t * t * b2) / (4.0 * f * f * f * f);
      trips.push_back({m, m, V * ht});
      form.mass[m] = ht;
    }
  }
  form.K = linalg::CsrMatrix::from_triplets(nt, nt, std::move(trips));
  form.end_condition = EndCondition::dirichlet;
  form.a = a;
  form.S = 0.0;
  form.ns = nt;  // unknown count along the single axis
  form.nt = 0;
  form.hs = ht;
  form.ht = 0.0;
  return form;
}

namespace {

// Transverse average of V_a against the ground transverse density
// chi_1(u)^2 = cos^2(pi u / 2) on (-1,1), Simpson with 129 points. The t
// derivatives of f come from the closed form of f, not differences.
double averaged_va(const StripModel& model, double s, double a_value) {
  const double g = model.kdot_at(s);
  const double beta = model.rate_at(s);
  auto va_at_t = [&](double t) {
    const double F = (1.0 - t * g) * (1.0 - t * g) + t * t * beta * beta;
    const double Fp = -2.0 * g + 2.0 * t * (g * g + beta * beta);
    const double Fpp = 2.0 * (g * g + beta * beta);
    return -(3.0 / 16.0) * Fp * Fp / (F * F) + Fpp / (4.0 * F);
  };
  const int npts = 129;  // odd
  const double hu = 2.0 / (npts - 1);
  double acc = 0.0;
  for (int q = 0; q < npts; ++q) {
    const double u = -1.0 + q * hu;
    const double w = (q == 0 || q == npts - 1) ? 1.0 : (q % 2 ? 4.0 : 2.0);
    const double chi = std::cos(0.5 * M_PI * u);
    acc += w * va_at_t(a_value * u) * chi * chi;
  }
  return acc * hu / 3.0;
}

}  // namespace

DiscreteForm assemble_effective_1d(const StripModel& model, const Mesh1D& mesh_s,
                                   const EffectiveChoice& which) {
  mesh_s.validate();
  require_window(model, mesh_s.x0, mesh_s.x1);
  const auto report = validate_assumptions(model);
  if (!report.thin_ass_ok)
    throw AssumptionError("thin_ass", "thin-strip assumption fails on the window");

  const int n = mesh_s.n;
  const double h = mesh_s.h();
  std::vector<double> V(n);
  for (int i = 0; i < n; ++i) {
    const double s = mesh_s.node(i);
    if (which.use_v_a) {
      if (!(which.a_value > 0.0) || !(which.a_value * model.max_abs_kdot() < 1.0))
        throw AssumptionError("ass21", "V_a requested with invalid a");
      V[i] = averaged_va(model, s, which.a_value);
    } else {
      const double g = model.kdot_at(s);
      const double b = model.rate_at(s);
      V[i] = -0.25 * g * g + 0.5 * b * b;
    }
  }

  (void)h;
  return assemble_schrodinger_1d(V, mesh_s, EndCondition::dirichlet);
}

DiscreteForm assemble_schrodinger_1d(const std::vector<double>& potential, const Mesh1D& mesh,
                                     EndCondition ends) {
  mesh.validate();
  const bool dirichlet = ends == EndCondition::dirichlet;
  const int n = dirichlet ? mesh.n : mesh.n + 2;
  if (static_cast<int>(potential.size()) != n)
    throw std::invalid_argument("assemble_schrodinger_1d: potential size mismatch");
  const double h = mesh.h();

  std::vector<linalg::Triplet> trips;
  const int first_edge = dirichlet ? -1 : 0;
  const int last_edge = dirichlet ? mesh.n - 1 : mesh.n;
  for (int i = first_edge; i <= last_edge; ++i) {
    const double c = 1.0 / h;
    const bool a_in = i >= 0;
    const bool b_in = i + 1 < n;
    if (a_in) trips.push_back({i, i, c});
    if (b_in) trips.push_back({i + 1, i + 1, c});
    if (a_in && b_in) {
      trips.push_back({i, i + 1, -c});
      trips.push_back({i + 1, i, -c});
    }
  }

  DiscreteForm form;
  form.mass.resize(n);
  for (int i = 0; i < n; ++i) {
    double w = h;
    if (!dirichlet && (i == 0 || i == n - 1)) w = 0.5 * h;  // trapezoid ends
    trips.push_back({i, i, potential[i] * w});
    form.mass[i] = w;
  }
  form.K = linalg::CsrMatrix::from_triplets(n, n, std::move(trips));
  form.end_condition = ends;
  form.S = 0.5 * (mesh.x1 - mesh.x0);
  form.a = 0.0;
  form.ns = n;
  form.nt = 0;
  form.hs = h;
  form.ht = 0.0;
  return form;
}

DiscreteForm assemble_thin_reference_2d(const StripModel& model, const Mesh2D& mesh_pi,
                                        double a_value) {
  if (!(a_value > 0.0)) throw std::invalid_argument("assemble_thin_reference_2d: a must be > 0");
  if (std::abs(mesh_pi.a - 1.0) > 1e-12)
    throw std::invalid_argument("assemble_thin_reference_2d: transverse window must be (-1,1)");
  mesh_pi.validate();
  require_window(model, -mesh_pi.S, mesh_pi.S);
  if (!(a_value * model.max_abs_kdot() < 1.0))
    throw AssumptionError("ass21", "a*max|k.Theta| >= 1 at the requested width");

  const double hs = mesh_pi.hs(), hu = mesh_pi.ht();
  const int ns = mesh_pi.ns, nu = mesh_pi.nt;
  auto idx = [&](int i, int m) { return i * nu + m; };
  auto s_of = [&](int i) { return -mesh_pi.S + (i + 1) * hs; };

  std::vector<linalg::Triplet> trips;
  trips.reserve(static_cast<std::size_t>(ns) * nu * 5);
  for (int i = -1; i <= ns - 1; ++i) {
    for (int m = 0; m < nu; ++m) {
      const double c = hu / hs;
      const bool a_in = i >= 0;
      const bool b_in = i + 1 < ns;
      if (a_in) trips.push_back({idx(i, m), idx(i, m), c});
      if (b_in) trips.push_back({idx(i + 1, m), idx(i + 1, m), c});
      if (a_in && b_in) {
        trips.push_back({idx(i, m), idx(i + 1, m), -c});
        trips.push_back({idx(i + 1, m), idx(i, m), -c});
      }
    }
  }
  const double cu = (hs / hu) / (a_value * a_value);
  for (int i = 0; i < ns; ++i)
    for (int m = -1; m <= nu - 1; ++m) {
      const bool a_in = m >= 0;
      const bool b_in = m + 1 < nu;
      if (a_in) trips.push_back({idx(i, m), idx(i, m), cu});
      if (b_in) trips.push_back({idx(i, m + 1), idx(i, m + 1), cu});
      if (a_in && b_in) {
        trips.push_back({idx(i, m), idx(i, m + 1), -cu});
        trips.push_back({idx(i, m + 1), idx(i, m), -cu});
      }
    }
  for (int i = 0; i < ns; ++i) {
    const double s = s_of(i);
    const double g = model.kdot_at(s);
    const double b = model.rate_at(s);
    const double veff = -0.25 * g * g + 0.5 * b * b;
    for (int m = 0; m < nu; ++m) trips.push_back({idx(i, m), idx(i, m), veff * hs * hu});
  }

  DiscreteForm form;
  form.K = linalg::CsrMatrix::from_triplets(ns * nu, ns * nu, std::move(trips));
  form.mass.assign(static_cast<std::size_t>(ns) * nu, hs * hu);
  form.end_condition = EndCondition::dirichlet;
  form.S = mesh_pi.S;
  form.a = 1.0;
  form.ns = ns;
  form.nt = nu;
  form.hs = hs;
  form.ht = hu;
  return form;
}

void write_form_matrix_market(const DiscreteForm& form, const std::string& path) {
  std::ostringstream os;
  form.K.write_matrix_market(os);
  io::write_text_atomic(path, os.str());
}

std::string form_metadata_json(const DiscreteForm& form) {
  std::ostringstream os;
  os << "{";
  os << "\"unknowns\":" << form.size();
  os << ",\"ns\":" << form.ns << ",\"nt\":" << form.nt;
  os << ",\"hs\":" << io::format_g17(form.hs) << ",\"ht\":" << io::format_g17(form.ht);
  os << ",\"S\":" << io::format_g17(form.S) << ",\"a\":" << io::format_g17(form.a);
  os << ",\"end_condition\":\""
     << (form.end_condition == EndCondition::dirichlet ? "dirichlet" : "neumann") << "\"";
  os << ",\"nnz\":" << form.K.nnz();
  os << "}";
  return os.str();
}

double fd_dirichlet_eigenvalue(double L, int n, int j) {
  const double h = L / (n + 1);
  const double s = std::sin(0.5 * j * M_PI * h / L);
  return 4.0 / (h * h) * s * s;
}

}  // namespace strips
