#include "strips/effective.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "strips/io.hpp"
#include "strips/simd/kernels.hpp"
#include "strips/util.hpp"

namespace strips {

LambdaProfile lambda_profile(const StripModel& model, int nt, bool use_potential_form,
                             bool extrapolate) {
  if (use_potential_form) {
    for (double g : model.kdotTheta)
      if (std::abs(g) > 1e-12)
        throw std::invalid_argument("lambda_profile: potential form requires k.Theta == 0");
  }
  const double E1 = transverse_threshold(model.a);
  const int count = model.grid.count;

  LambdaProfile out;
  out.grid = model.grid;
  out.mesh_nt = nt;
  out.extrapolated = extrapolate;
  out.lambda.assign(count, 0.0);

  const auto formulation =
      use_potential_form ? TransverseFormulation::potential : TransverseFormulation::weighted;
  EigOptions opt;
  opt.want_vectors = false;

  parallel_for(static_cast<std::size_t>(count), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto form_h = assemble_transverse_1d(model, static_cast<int>(i), nt, formulation);
      const double e_h = smallest_eigs(form_h, 1, opt).eigenvalues[0];
      double e = e_h;
      if (extrapolate) {
        const auto form_h2 =
            assemble_transverse_1d(model, static_cast<int>(i), 2 * nt + 1, formulation);
        const double e_h2 = smallest_eigs(form_h2, 1, opt).eigenvalues[0];
        // nt -> 2nt+1 halves the step exactly
        e = (4.0 * e_h2 - e_h) / 3.0;
      }
      out.lambda[i] = e - E1;
    }
  });
  return out;
}

HardyFloor local_hardy_floor(const StripModel& model, const LambdaProfile& profile,
                             double support_tol) {
  HardyFloor out;
  out.profile = profile;
  out.positivity_claim = model.a * model.max_rate() <= std::sqrt(2.0) + 1e-12;
  out.min_lambda = profile.lambda.empty() ? 0.0 : profile.lambda.front();
  out.max_lambda = out.min_lambda;
  for (std::size_t i = 0; i < profile.lambda.size(); ++i) {
    const double v = profile.lambda[i];
    out.min_lambda = std::min(out.min_lambda, v);
    out.max_lambda = std::max(out.max_lambda, v);
    if (v > support_tol) {
      if (out.support_begin < 0) out.support_begin = static_cast<int>(i);
      out.support_end = static_cast<int>(i);
    }
  }
  return out;
}

EffectivePotential effective_potential(const StripModel& model) {
  EffectivePotential out;
  out.grid = model.grid;
  out.v_eff.resize(model.grid.count);
  double supg = 0.0;
  for (int i = 0; i < model.grid.count; ++i) {
    const double g = model.kdotTheta[i];
    const double b = model.absThetaPrime[i];
    out.v_eff[i] = -0.25 * g * g + 0.5 * b * b;
    supg = std::max(supg, std::abs(g));
  }
  out.z0 = -0.25 * supg * supg;
  return out;
}

double v_a_pointwise(const StripModel& model, double s, double u, double a_value) {
  const double g = model.kdot_at(s);
  const double beta = model.rate_at(s);
  const double t = a_value * u;
  const double F = (1.0 - t * g) * (1.0 - t * g) + t * t * beta * beta;
  const double Fp = -2.0 * g + 2.0 * t * (g * g + beta * beta);
  const double Fpp = 2.0 * (g * g + beta * beta);
  return -(3.0 / 16.0) * Fp * Fp / (F * F) + Fpp / (4.0 * F);
}

ThinTransformData thin_transform_data(const StripModel& model, double a_value, int u_samples) {
  if (!(a_value > 0.0)) throw std::invalid_argument("thin_transform_data: a must be positive");
  if (!(a_value * model.max_abs_kdot() < 1.0))
    throw AssumptionError("ass21", "a*max|k.Theta| >= 1 at the requested width");
  const auto report = validate_assumptions(model);
  if (!report.thin_ass_ok) throw AssumptionError("thin_ass", "thin-strip assumption fails");
  if (u_samples < 3) throw std::invalid_argument("thin_transform_data: u_samples too small");

  ThinTransformData out;
  out.a_value = a_value;
  const int count = model.grid.count;
  out.s_nodes.resize(count);
  for (int i = 0; i < count; ++i) out.s_nodes[i] = model.grid.node(i);
  out.u_nodes.resize(u_samples);
  for (int q = 0; q < u_samples; ++q)
    out.u_nodes[q] = -1.0 + 2.0 * q / (u_samples - 1);

  const double ds = model.grid.ds;
  out.f_a.resize(static_cast<std::size_t>(count) * u_samples);
  out.d1_f_a.resize(out.f_a.size());
  out.v_a.resize(out.f_a.size());

  for (int i = 0; i < count; ++i) {
    const double s = out.s_nodes[i];
    const double g = model.kdot_at(s);
    const double beta = model.rate_at(s);
    // s-derivatives of the profiles (central differences on the grid,
    // closures sampled the same way for consistency)
    const double sp = std::min(s + ds, model.grid.s_end());
    const double sm = std::max(s - ds, model.grid.s0);
    const double gp = (model.kdot_at(sp) - model.kdot_at(sm)) / (sp - sm);
    const double b2p =
        (model.rate_at(sp) * model.rate_at(sp) - model.rate_at(sm) * model.rate_at(sm)) /
        (sp - sm);
    const double veff = -0.25 * g * g + 0.5 * beta * beta;

    for (int q = 0; q < u_samples; ++q) {
      const double t = a_value * out.u_nodes[q];
      const double one = 1.0 - t * g;
      const double F = one * one + t * t * beta * beta;
      const double f = std::sqrt(F);
      const std::size_t at = static_cast<std::size_t>(i) * u_samples + q;
      out.f_a[at] = f;
      out.d1_f_a[at] = (one * (-t * gp) + 0.5 * t * t * b2p) / f;
      out.v_a[at] = v_a_pointwise(model, s, out.u_nodes[q], a_value);
      out.sup_f_minus_1 = std::max(out.sup_f_minus_1, std::abs(f - 1.0));
      out.sup_d1_f = std::max(out.sup_d1_f, std::abs(out.d1_f_a[at]));
      out.sup_va_minus_veff = std::max(out.sup_va_minus_veff, std::abs(out.v_a[at] - veff));
    }
  }
  return out;
}

ProjectionDefectReport projection_defect(const DiscreteForm& form0, double a_value, double z,
                                         double z0, const std::vector<double>& F,
                                         double cg_tol) {
  if (!(z < z0)) throw std::invalid_argument("projection_defect: z must lie below z0");
  if (form0.nt == 0) throw std::invalid_argument("projection_defect: needs the 2D form");
  const int ns = form0.s_count();
  const int nu = form0.nt;
  if (static_cast<int>(F.size()) != ns * nu)
    throw std::invalid_argument("projection_defect: F size mismatch");

  // chi_1 sampled on the u lattice is the exact discrete transverse ground
  // vector; normalize in the discrete measure so P is a projection.
  std::vector<double> chi(nu);
  double nrm = 0.0;
  for (int m = 0; m < nu; ++m) {
    const double u = form0.t_of_row(m) / form0.a;  // form0.a == 1
    chi[m] = std::cos(0.5 * M_PI * u);
    nrm += chi[m] * chi[m] * form0.ht;
  }
  nrm = std::sqrt(nrm);
  for (auto& v : chi) v /= nrm;

  auto apply_perp = [&](const std::vector<double>& x) {
    std::vector<double> y = x;
    for (int i = 0; i < ns; ++i) {
      double c = 0.0;
      for (int m = 0; m < nu; ++m) c += x[static_cast<std::size_t>(i) * nu + m] * chi[m];
      c *= form0.ht;
      for (int m = 0; m < nu; ++m) y[static_cast<std::size_t>(i) * nu + m] -= c * chi[m];
    }
    return y;
  };

  ProjectionDefectReport rep;
  rep.gap_bound = 4.0 * a_value * a_value / (3.0 * M_PI * M_PI);
  rep.paper_printed = a_value * a_value / (3.0 * M_PI * M_PI);

  const auto Fperp = apply_perp(F);
  double fn = std::sqrt(simd::nrm2sq(Fperp.data(), Fperp.size()));
  rep.rhs_perp_norm = fn;
  if (fn == 0.0) {
    rep.ratio = 0.0;
    rep.within_bound = true;
    return rep;
  }

  std::vector<double> rhs(Fperp.size());
  simd::dmul(form0.mass.data(), Fperp.data(), rhs.data(), rhs.size());
  const double E1 = transverse_threshold(a_value);
  const auto psi = solve_shifted(form0, E1 + z, rhs, cg_tol);
  const auto psi_perp = apply_perp(psi);
  rep.ratio = std::sqrt(simd::nrm2sq(psi_perp.data(), psi_perp.size())) / fn;
  rep.within_bound = rep.ratio <= rep.gap_bound;
  return rep;
}

void write_lambda_csv(const LambdaProfile& profile, const std::string& path) {
  io::Table tab;
  tab.header = "s,lambda";
  for (int i = 0; i < profile.grid.count; ++i)
    tab.rows.push_back({profile.grid.node(i), profile.lambda[i]});
  io::write_csv(tab, path);
}

void write_veff_csv(const EffectivePotential& pot, const std::string& path) {
  io::Table tab;
  tab.header = "s,v_eff";
  for (int i = 0; i < pot.grid.count; ++i)
    tab.rows.push_back({pot.grid.node(i), pot.v_eff[i]});
  io::write_csv(tab, path);
}

void write_thin_tables_csv(const ThinTransformData& data, const std::string& path) {
  io::Table tab;
  tab.header = "s,u,f_a,v_a";
  const int nu = static_cast<int>(data.u_nodes.size());
  for (std::size_t i = 0; i < data.s_nodes.size(); ++i)
    for (int q = 0; q < nu; ++q)
      tab.rows.push_back({data.s_nodes[i], data.u_nodes[q], data.f_a[i * nu + q],
                          data.v_a[i * nu + q]});
  io::write_csv(tab, path);
}

}  // namespace strips
