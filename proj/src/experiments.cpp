#include "strips/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "strips/simd/kernels.hpp"
#include "strips/util.hpp"

namespace strips {

namespace {

linalg::CsrMatrix add_diagonal(const linalg::CsrMatrix& K, const std::vector<double>& d,
                               double coef) {
  std::vector<linalg::Triplet> trips;
  trips.reserve(K.nnz() + d.size());
  const auto& rp = K.rowptr();
  const auto& ci = K.colidx();
  const auto& vals = K.values();
  for (int r = 0; r < K.rows(); ++r)
    for (int p = rp[r]; p < rp[r + 1]; ++p) trips.push_back({r, ci[p], vals[p]});
  for (int i = 0; i < K.rows(); ++i) trips.push_back({i, i, coef * d[i]});
  return linalg::CsrMatrix::from_triplets(K.rows(), K.cols(), std::move(trips));
}

double simpson_weight(int q, int npts) {
  if (q == 0 || q == npts - 1) return 1.0;
  return (q % 2) ? 4.0 : 2.0;
}

double lowest_eigenvalue(const DiscreteForm& form, const SolverSettings& solver,
                         double tol_override = 0.0) {
  EigOptions opt;
  opt.tol = tol_override > 0.0 ? tol_override : solver.tol;
  opt.seed = solver.seed;
  opt.want_vectors = false;
  const auto res = smallest_eigs(form, 1, opt);
  if (!res.converged) throw SolverError("eigensolve did not converge");
  return res.eigenvalues[0];
}

}  // namespace

std::string verdict_json(const Verdict& v) {
  std::ostringstream os;
  os << "{\"claim\":\"" << v.claim_id << "\",\"pass\":" << (v.pass ? "true" : "false")
     << ",\"margin\":" << io::format_g17(v.margin) << ",\"metrics\":{";
  bool first = true;
  for (const auto& [k, val] : v.metrics) {
    if (!first) os << ",";
    first = false;
    os << "\"" << k << "\":" << io::format_g17(val);
  }
  os << "}}";
  return os.str();
}

std::string verdict_summary_text(const Verdict& v) {
  std::ostringstream os;
  os << v.claim_id << ": " << (v.pass ? "PASS" : "FAIL") << " (margin " << v.margin << ")\n";
  for (const auto& [k, val] : v.metrics) os << "  " << k << " = " << val << "\n";
  return os.str();
}

StripModel ModelSpec::build(double needed_half_window) const {
  double W = std::max(window, needed_half_window);
  if (!(W > 0.0)) throw std::invalid_argument("ModelSpec: window not determined");
  const int count = static_cast<int>(std::ceil(2.0 * W / ds)) + 1;
  SGrid grid{-W, 2.0 * W / (count - 1), count};
  return StripModel::direct(grid, a, bend, twist);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: bad data");
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> sample_on_form(const DiscreteForm& form,
                                   const std::function<double(double, double)>& fn) {
  const int scount = form.s_count();
  std::vector<double> v(static_cast<std::size_t>(scount) * form.nt);
  for (int i = 0; i < scount; ++i)
    for (int m = 0; m < form.nt; ++m)
      v[static_cast<std::size_t>(i) * form.nt + m] = fn(form.s_of_column(i), form.t_of_row(m));
  return v;
}

// --- Thm 4.1: bent strips bind ------------------------------------------------

Verdict bent_bound_state(const BentStudyConfig& config) {
  if (config.model.twist.max_abs() != 0.0)
    throw std::invalid_argument("bent_bound_state: model must be untwisted");
  if (config.model.bend.max_abs() == 0.0)
    throw std::invalid_argument("bent_bound_state: bending must be nonzero");
  if (config.ladder.empty()) throw std::invalid_argument("bent_bound_state: empty ladder");

  double maxS = 0.0;
  for (const auto& r : config.ladder) maxS = std::max(maxS, r.S);
  const StripModel model = config.model.build(maxS + 1.0);
  const StripModel straight =
      StripModel::direct(model.grid, config.model.a, Profile::zero(), Profile::zero());
  const double E1 = transverse_threshold(config.model.a);

  Verdict v;
  v.claim_id = "bent_bound_state";
  io::Table tab;
  tab.header = "S,ns,nt,lambda1,lambda1_straight,straight_disc_err";

  std::vector<double> lam(config.ladder.size());
  double finest_disc_err = 0.0;
  for (std::size_t r = 0; r < config.ladder.size(); ++r) {
    const auto& rung = config.ladder[r];
    Mesh2D mesh{rung.S, config.model.a, rung.ns, rung.nt};
    const auto form = assemble_2d(model, mesh, EndCondition::dirichlet);
    lam[r] = lowest_eigenvalue(form, config.solver);

    const auto form0 = assemble_2d(straight, mesh, EndCondition::dirichlet);
    const double lam0 = lowest_eigenvalue(form0, config.solver);
    const double box = E1 + std::pow(M_PI / (2.0 * rung.S), 2);
    const double derr = std::abs(lam0 - box);
    if (r + 1 == config.ladder.size()) finest_disc_err = derr;
    tab.rows.push_back({rung.S, double(rung.ns), double(rung.nt), lam[r], lam0, derr});
  }

  // monotone in S among rungs with matching steps
  bool monotone = true;
  for (std::size_t i = 0; i < config.ladder.size(); ++i)
    for (std::size_t j = 0; j < config.ladder.size(); ++j) {
      if (i == j) continue;
      const auto &ri = config.ladder[i], &rj = config.ladder[j];
      const double hi = 2.0 * ri.S / (ri.ns + 1), hj = 2.0 * rj.S / (rj.ns + 1);
      if (std::abs(hi - hj) < 1e-12 && ri.nt == rj.nt && rj.S > ri.S)
        if (lam[j] > lam[i] + 1e-10) monotone = false;
    }

  const double margin = E1 - lam.back();
  v.margin = margin;
  v.metrics["lambda1_finest"] = lam.back();
  v.metrics["E1"] = E1;
  v.metrics["margin"] = margin;
  v.metrics["straight_disc_err_finest"] = finest_disc_err;
  v.metrics["monotone_in_S"] = monotone ? 1.0 : 0.0;
  v.pass = (margin > 3.0 * finest_disc_err) && monotone;
  v.tables.emplace_back("ladder", std::move(tab));
  return v;
}

// --- Thm 4.1 trial oracle ------------------------------------------------------

double bent_trial_oracle(const TrialOracleConfig& config, int n, double eps) {
  if (config.model.twist.max_abs() != 0.0)
    throw std::invalid_argument("bent_trial_oracle: model must be untwisted");
  if (n < 1) throw std::invalid_argument("bent_trial_oracle: n must be >= 1");
  const double a = config.model.a;
  const double E1 = transverse_threshold(a);
  const double S = 2.0 * n;  // supp phi_1(s/n) in [-2n, 2n]
  if (config.eta_width + std::abs(config.eta_center) > 2.0 * S)
    throw std::invalid_argument("bent_trial_oracle: eta support exceeds the window");
  const StripModel model = config.model.build(S + 1.0);

  // eta sign-aligned so that the integral of eta * k.Theta is positive
  const Profile eta0 =
      Profile::bump_profile(1.0, config.eta_center, config.eta_width);
  double align = 0.0;
  {
    const int ns = 4001;
    const double h = 2.0 * S / (ns - 1);
    for (int q = 0; q < ns; ++q) {
      const double s = -S + q * h;
      align += simpson_weight(q, ns) * eta0(s) * model.kdot_at(s);
    }
    align *= h / 3.0;
  }
  const double sign = align >= 0.0 ? 1.0 : -1.0;

  int npts_s = static_cast<int>(2.0 * S * config.quad_points_per_unit) + 1;
  if (npts_s % 2 == 0) ++npts_s;
  int npts_t = config.quad_points_t;
  if (npts_t % 2 == 0) ++npts_t;
  const double hs = 2.0 * S / (npts_s - 1);
  const double ht = 2.0 * a / (npts_t - 1);
  const double sqrtE1 = std::sqrt(E1);

  double h_energy = 0.0, norm2 = 0.0;
  for (int qs = 0; qs < npts_s; ++qs) {
    const double s = -S + qs * hs;
    const double ws = simpson_weight(qs, npts_s);
    const double phi = mollifier_plateau(s / n);
    const double dphi = mollifier_plateau_derivative(s / n) / n;
    const double et = sign * eta0(s);
    const double det = sign * eta0.derivative(s);
    const double g = model.kdot_at(s);
    for (int qt = 0; qt < npts_t; ++qt) {
      const double t = -a + qt * ht;
      const double wt = simpson_weight(qt, npts_t);
      const double chi = std::cos(sqrtE1 * t) / std::sqrt(a);
      const double dchi = -sqrtE1 * std::sin(sqrtE1 * t) / std::sqrt(a);
      const double f = 1.0 - t * g;  // untwisted: f is linear in t
      const double psi = phi * chi + eps * et * t * chi;
      const double d1 = dphi * chi + eps * det * t * chi;
      const double d2 = phi * dchi + eps * et * (chi + t * dchi);
      const double w = ws * wt;
      h_energy += w * (d1 * d1 / f + d2 * d2 * f);
      norm2 += w * psi * psi * f;
    }
  }
  const double cell = hs * ht / 9.0;
  h_energy *= cell;
  norm2 *= cell;
  return h_energy - E1 * norm2;
}

TrialSearchResult bent_trial_search(const TrialOracleConfig& config,
                                    const std::vector<int>& n_grid,
                                    const std::vector<double>& eps_grid) {
  TrialSearchResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (int n : n_grid)
    for (double eps : eps_grid) {
      const double val = bent_trial_oracle(config, n, eps);
      if (val < best.value) best = {n, eps, val, val < 0.0};
    }
  return best;
}

// --- Thm 5.1: Hardy certificate -------------------------------------------------

Verdict hardy_certificate(const HardyStudyConfig& config) {
  if (config.model.bend.max_abs() != 0.0)
    throw std::invalid_argument("hardy_certificate: model must be unbent (k.Theta = 0)");
  if (config.model.twist.max_abs() == 0.0)
    throw std::invalid_argument("hardy_certificate: twist must be nonzero");
  const double a = config.model.a;
  if (a * config.model.twist.max_abs() > std::sqrt(2.0) + 1e-12)
    throw AssumptionError("hardy_smallness", "a*max|Theta'| exceeds sqrt(2)");
  if (config.ladder.empty()) throw std::invalid_argument("hardy_certificate: empty ladder");

  double maxS = 0.0;
  for (const auto& r : config.ladder) maxS = std::max(maxS, r.S);
  const StripModel model = config.model.build(maxS + 1.0);
  const double E1 = transverse_threshold(a);

  Verdict v;
  v.claim_id = "hardy_certificate";

  // local Hardy profile
  const LambdaProfile lam = lambda_profile(model, config.lambda_nt, /*potential*/ true, true);
  const HardyFloor floor = local_hardy_floor(model, lam);
  io::Table lam_tab;
  lam_tab.header = "s,lambda";
  for (int i = 0; i < lam.grid.count; ++i)
    lam_tab.rows.push_back({lam.grid.node(i), lam.lambda[i]});

  double lambda_on_bump_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < model.grid.count; ++i)
    if (model.absThetaPrime[i] > 0.05 * model.max_rate())
      lambda_on_bump_min = std::min(lambda_on_bump_min, lam.lambda[i]);
  const bool lambda_ok = floor.min_lambda >= -1e-8 && lambda_on_bump_min > 0.0;

  // c_num per ladder rung from the pencil (K - E1 M) u = c Mrho u
  io::Table cnum_tab;
  cnum_tab.header = "S,ns,nt,c_num,lambda1_plain";
  std::vector<double> cnums;
  double lambda1_plain = 0.0;
  for (const auto& rung : config.ladder) {
    Mesh2D mesh{rung.S, a, rung.ns, rung.nt};
    const auto form = assemble_2d(model, mesh, EndCondition::dirichlet);
    const auto A = add_diagonal(form.K, form.mass, -E1);
    std::vector<double> mrho(form.mass.size());
    for (int i = 0; i < form.s_count(); ++i) {
      const double s = form.s_of_column(i);
      const double rho = 1.0 / (1.0 + s * s);
      for (int m = 0; m < form.nt; ++m)
        mrho[static_cast<std::size_t>(i) * form.nt + m] =
            rho * form.mass[static_cast<std::size_t>(i) * form.nt + m];
    }
    EigOptions opt;
    opt.tol = config.solver.tol;
    opt.seed = config.solver.seed;
    opt.want_vectors = false;
    opt.method = EigMethod::lobpcg;
    const auto res = smallest_eigs(A, mrho, 1, opt);
    if (!res.converged) throw SolverError("hardy pencil eigensolve did not converge");
    cnums.push_back(res.eigenvalues[0]);
    lambda1_plain = lowest_eigenvalue(form, config.solver);
    cnum_tab.rows.push_back({rung.S, double(rung.ns), double(rung.nt), cnums.back(),
                             lambda1_plain});
  }

  // analytic constant from the proof recipe on I = supp of the twist rate
  const double I_lo = config.model.twist.center - 0.5 * config.model.twist.width;
  const double I_hi = config.model.twist.center + 0.5 * config.model.twist.width;
  const double s0 = config.model.twist.center;
  const double Ilen = I_hi - I_lo;

  double lambda0 = 0.0;
  {
    Mesh1D mesh{I_lo, I_hi, 199};
    std::vector<double> pot(mesh.n + 2);
    for (int i = 0; i < mesh.n + 2; ++i) {
      const double s = I_lo + i * mesh.h();
      // interpolate lambda(s) from the profile grid
      const double x = (s - lam.grid.s0) / lam.grid.ds;
      const int i0 = std::max(0, std::min(lam.grid.count - 2, static_cast<int>(x)));
      const double w = std::min(1.0, std::max(0.0, x - i0));
      pot[i] = (1.0 - w) * lam.lambda[i0] + w * lam.lambda[i0 + 1];
    }
    const auto neum = assemble_schrodinger_1d(pot, mesh, EndCondition::neumann);
    EigOptions opt;
    opt.want_vectors = false;
    lambda0 = smallest_eigs(neum, 1, opt).eigenvalues[0];
  }

  const double C = std::sqrt(1.0 + a * a * model.max_rate() * model.max_rate());
  // eta is the ramp |s-s0|/(|I|/2) clamped to [0,1]: |eta'|_inf = 2/|I| exactly
  const double eta_slope = 2.0 / Ilen;
  const double K_eta = 16.0 * eta_slope * eta_slope + 2.0;
  double inf_ratio = 1.0;
  if (std::abs(s0) > 1e-15) {
    const double r1 = (s0 + std::sqrt(s0 * s0 + 4.0)) / 2.0;
    const double r2 = (s0 - std::sqrt(s0 * s0 + 4.0)) / 2.0;
    auto ratio = [&](double s) { return (1.0 + s * s) / (1.0 + (s - s0) * (s - s0)); };
    inf_ratio = std::min({ratio(r1), ratio(r2), 1.0});
  }
  const double c_ana =
      lambda0 / (C * C * (16.0 * lambda0 + C * K_eta)) * inf_ratio;

  const double c_num = cnums.back();
  const bool stable = cnums.size() < 2 ||
                      std::abs(cnums.back() - cnums[cnums.size() - 2]) <= 0.2 * std::abs(c_num);
  const bool corollary_ok = lambda1_plain >= E1 - 1e-3;

  v.metrics["c_num"] = c_num;
  v.metrics["c_ana"] = c_ana;
  v.metrics["lambda0_neumann"] = lambda0;
  v.metrics["lambda_min"] = floor.min_lambda;
  v.metrics["lambda_on_bump_min"] = lambda_on_bump_min;
  v.metrics["lambda1_plain"] = lambda1_plain;
  v.metrics["E1"] = E1;
  v.metrics["stable"] = stable ? 1.0 : 0.0;
  v.margin = c_num - c_ana;
  v.pass = lambda_ok && c_num > 0.0 && stable && c_num >= c_ana && corollary_ok;
  v.tables.emplace_back("lambda_profile", std::move(lam_tab));
  v.tables.emplace_back("c_num_ladder", std::move(cnum_tab));
  return v;
}

// --- Thm 5.4: stability of the twisted floor under weak bending ----------------

Verdict stability_study(const StabilityStudyConfig& config) {
  if (config.model.bend.max_abs() != 0.0)
    throw std::invalid_argument("stability_study: base model must be unbent");
  const double a = config.model.a;
  const double E1 = transverse_threshold(a);
  const double tol = config.e1_tolerance;

  Verdict v;
  v.claim_id = "stability_study";
  io::Table tab;
  tab.header = "eps,lambda1_twisted,lambda1_untwisted";

  double threshold = 0.0;
  bool crossing_found = false;
  double crossing_eps = 0.0;

  for (double eps : config.eps_ladder) {
    if (!(a * eps < 1.0))
      throw AssumptionError("ass21", "bending amplitude violates a*max|k.Theta| < 1");
    ModelSpec bent_spec = config.model;
    bent_spec.bend = Profile::lorentz(eps, 0.0);
    const StripModel twisted = bent_spec.build(config.mesh.S + 1.0);
    ModelSpec untwisted_spec = bent_spec;
    untwisted_spec.twist = Profile::zero();
    const StripModel untwisted = untwisted_spec.build(config.mesh.S + 1.0);

    Mesh2D mesh{config.mesh.S, a, config.mesh.ns, config.mesh.nt};
    const double lam_tw =
        lowest_eigenvalue(assemble_2d(twisted, mesh, EndCondition::dirichlet), config.solver);
    const double lam_un =
        lowest_eigenvalue(assemble_2d(untwisted, mesh, EndCondition::dirichlet), config.solver);
    tab.rows.push_back({eps, lam_tw, lam_un});

    if (lam_tw >= E1 - tol && eps > threshold) threshold = eps;
    if (lam_un < E1 - tol && !crossing_found) {
      crossing_found = true;
      crossing_eps = eps;
    }
  }

  v.metrics["threshold_eps"] = threshold;
  v.metrics["crossing_eps_untwisted"] = crossing_found ? crossing_eps : -1.0;
  v.metrics["E1"] = E1;
  v.margin = threshold;
  v.pass = threshold > 0.0 && crossing_found;
  v.tables.emplace_back("stability_ladder", std::move(tab));
  return v;
}

// --- Thm 3.1: quasimodes drive the residual down --------------------------------

Verdict quasimode_study(const QuasimodeStudyConfig& config) {
  const double a = config.model.a;
  const double E1 = transverse_threshold(a);
  if (config.eta_energy < E1 - 1e-12)
    throw std::invalid_argument("quasimode_study: eta must be >= E1");
  if (config.n_ladder.empty()) throw std::invalid_argument("quasimode_study: empty ladder");

  for (int n : config.n_ladder)
    if (double(n) * n + n + 2.0 > config.mesh.S)
      throw std::invalid_argument("quasimode_study: window too small for requested n");

  const StripModel model = config.model.build(config.mesh.S + 1.0);
  const auto report = validate_assumptions(model);
  if (!report.asymptotically_flat_ok)
    throw AssumptionError("asymptotically_flat", "model is not asymptotically flat");

  Mesh2D mesh{config.mesh.S, a, config.mesh.ns, config.mesh.nt};
  const auto form = assemble_2d(model, mesh, EndCondition::dirichlet);
  const double lambda = std::sqrt(std::max(config.eta_energy - E1, 0.0));
  const double sqrtE1 = std::sqrt(E1);

  // L2-normalized mollifier for the drifting envelopes
  double phi_norm = 1.0;
  {
    const int npts = 2001;
    const double h = 2.0 / (npts - 1);
    double acc = 0.0;
    for (int q = 0; q < npts; ++q) {
      const double x = -1.0 + q * h;
      acc += simpson_weight(q, npts) * bump(x) * bump(x);
    }
    phi_norm = std::sqrt(acc * h / 3.0);
  }

  Verdict v;
  v.claim_id = "quasimode_study";
  io::Table tab;
  tab.header = "n,r_n";
  std::vector<double> rvals;

  const std::size_t N = form.mass.size();
  std::vector<double> psi_re(N), psi_im(N), w(N), tmp(N);

  for (int n : config.n_ladder) {
    auto envelope = [&](double s) {
      return bump(s / n - n) / (phi_norm * std::sqrt(double(n)));
    };
    for (int part = 0; part < 2; ++part) {
      auto& psi = part == 0 ? psi_re : psi_im;
      psi = sample_on_form(form, [&](double s, double t) {
        const double chi = std::cos(sqrtE1 * t) / std::sqrt(a);
        const double osc = part == 0 ? std::cos(lambda * s) : std::sin(lambda * s);
        return envelope(s) * chi * osc;
      });
    }

    double r2 = 0.0;
    for (int part = 0; part < 2; ++part) {
      const auto& psi = part == 0 ? psi_re : psi_im;
      form.K.mul(psi.data(), w.data());
      simd::dmul(form.mass.data(), psi.data(), tmp.data(), N);
      simd::axpy(-config.eta_energy, tmp.data(), w.data(), N);
      const auto sol = solve_shifted(form, -1.0, w, 1e-10);
      r2 += simd::dot(w.data(), sol.data(), N);
    }
    rvals.push_back(std::sqrt(std::max(r2, 0.0)));
    tab.rows.push_back({double(n), rvals.back()});
  }

  bool decreasing = true;
  for (std::size_t i = 1; i < rvals.size(); ++i)
    if (rvals[i] >= rvals[i - 1]) decreasing = false;

  v.metrics["eta"] = config.eta_energy;
  v.metrics["r_first"] = rvals.front();
  v.metrics["r_last"] = rvals.back();
  v.margin = rvals.front() - rvals.back();
  v.pass = decreasing;
  v.tables.emplace_back("quasimode_residuals", std::move(tab));
  return v;
}

// --- Thm 6.1 / Cor 6.3: thin-strip sweep ----------------------------------------

Verdict thin_limit_sweep(const ThinSweepConfig& config) {
  if (config.a_ladder.size() < 2)
    throw std::invalid_argument("thin_limit_sweep: need at least two widths");
  for (std::size_t i = 1; i < config.a_ladder.size(); ++i)
    if (config.a_ladder[i] >= config.a_ladder[i - 1])
      throw std::invalid_argument("thin_limit_sweep: ladder must decrease");

  Verdict v;
  v.claim_id = "thin_limit_sweep";
  io::Table tab;
  tab.header = "a,e,lambda_hat,mu_hat,sup_va_minus_veff";

  std::vector<double> evals, supvas;
  for (double a : config.a_ladder) {
    ModelSpec spec = config.model;
    spec.a = a;
    const StripModel model = spec.build(config.S + 1.0);
    const auto rep = validate_assumptions(model);
    if (!rep.thin_ass_ok || !(a * model.max_abs_kdot() < 1.0))
      throw AssumptionError("thin_ass", "assumption fails at a rung");

    auto lambda_hat_at = [&](int ns, int nt) {
      Mesh2D mesh{config.S, a, ns, nt};
      const auto form = assemble_2d(model, mesh, EndCondition::dirichlet);
      const double lam = lowest_eigenvalue(form, config.solver, 1e-10);
      return lam - fd_dirichlet_eigenvalue(2.0 * a, nt, 1);
    };
    const double lh_c = lambda_hat_at(config.ns, config.nt);
    const double lh_f = lambda_hat_at(2 * config.ns + 1, 2 * config.nt + 1);
    const double lambda_hat = (4.0 * lh_f - lh_c) / 3.0;

    auto mu_at = [&](int ns) {
      Mesh1D mesh{-config.S, config.S, ns};
      const auto form = assemble_effective_1d(model, mesh, {});
      EigOptions opt;
      opt.tol = 1e-12;
      opt.seed = config.solver.seed;
      opt.want_vectors = false;
      return smallest_eigs(form, 1, opt).eigenvalues[0];
    };
    const double mu_c = mu_at(config.ns);
    const double mu_f = mu_at(2 * config.ns + 1);
    const double mu_hat = (4.0 * mu_f - mu_c) / 3.0;

    const double e = std::abs(lambda_hat - mu_hat);
    const auto thin = thin_transform_data(model, a);
    evals.push_back(e);
    supvas.push_back(thin.sup_va_minus_veff);
    tab.rows.push_back({a, e, lambda_hat, mu_hat, thin.sup_va_minus_veff});
  }

  bool monotone = true;
  for (std::size_t i = 1; i < evals.size(); ++i)
    if (evals[i] >= evals[i - 1]) monotone = false;

  const double slope = loglog_slope(config.a_ladder, evals);

  bool ratios_ok = true;
  double worst_ratio = 0.0;
  for (std::size_t i = 1; i < supvas.size(); ++i) {
    // consecutive rungs halve a by construction of the standard ladder
    const double ratio = supvas[i - 1] / supvas[i];
    worst_ratio = worst_ratio == 0.0 ? ratio : worst_ratio;
    if (std::abs(config.a_ladder[i - 1] / config.a_ladder[i] - 2.0) < 1e-9)
      if (ratio < 1.7 || ratio > 2.3) ratios_ok = false;
  }

  v.metrics["slope"] = slope;
  v.metrics["monotone"] = monotone ? 1.0 : 0.0;
  v.metrics["va_ratio_ok"] = ratios_ok ? 1.0 : 0.0;
  v.metrics["e_finest"] = evals.back();
  v.margin = slope;
  v.pass = monotone && ratios_ok && slope >= config.slope_lo && slope <= config.slope_hi;
  v.tables.emplace_back("thin_sweep", std::move(tab));
  return v;
}

}  // namespace strips
