#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "strips/discretize.hpp"
#include "strips/effective.hpp"
#include "strips/eigensolve.hpp"
#include "strips/io.hpp"
#include "strips/profiles.hpp"
#include "strips/stripgeom.hpp"

namespace strips {

struct MeshRung {
  double S = 0.0;
  int ns = 0, nt = 0;
};

struct SolverSettings {
  double tol = 1e-9;
  std::uint64_t seed = 1;
};

// Study outcome: one named claim, its pass flag and margin, the scalar
// metrics behind the decision and the tables to persist.
struct Verdict {
  std::string claim_id;
  bool pass = false;
  double margin = 0.0;
  std::map<std::string, double> metrics;
  std::vector<std::pair<std::string, io::Table>> tables;
};

std::string verdict_json(const Verdict& v);
std::string verdict_summary_text(const Verdict& v);

// Shared model recipe: direct profiles for the geodesic curvature k.Theta and
// the twist rate |Theta'| over a window, sampled on its own grid.
struct ModelSpec {
  double a = 1.0;
  Profile bend;      // k.Theta(s)
  Profile twist;     // |Theta'(s)|
  double window = 0.0;  // model covers [-window, window]; 0: derive from ladder
  double ds = 0.01;

  StripModel build(double needed_half_window) const;
};

// Bending produces an eigenvalue below E_1 (bound state).
struct BentStudyConfig {
  ModelSpec model;  // twist must be zero
  std::vector<MeshRung> ladder;
  SolverSettings solver;
};
Verdict bent_bound_state(const BentStudyConfig& config);

// Variational certificate h_1[psi_{n,eps}] < 0 evaluated by 2D Simpson
// quadrature, entirely independent of the eigensolver.
struct TrialOracleConfig {
  ModelSpec model;       // untwisted
  double eta_center = 0.0;
  double eta_width = 4.0;
  int quad_points_per_unit = 8;  // s resolution of the Simpson rule
  int quad_points_t = 65;        // odd
};
double bent_trial_oracle(const TrialOracleConfig& config, int n, double eps);

struct TrialSearchResult {
  int n = 0;
  double eps = 0.0;
  double value = 0.0;
  bool found_negative = false;
};
TrialSearchResult bent_trial_search(const TrialOracleConfig& config,
                                    const std::vector<int>& n_grid,
                                    const std::vector<double>& eps_grid);

// Twisting produces a Hardy weight: numerical constant from the weighted
// pencil and the analytic constant from the proof recipe.
struct HardyStudyConfig {
  ModelSpec model;  // bend must be zero, a*max twist rate <= sqrt(2)
  std::vector<MeshRung> ladder;
  SolverSettings solver;
  int lambda_nt = 400;
};
Verdict hardy_certificate(const HardyStudyConfig& config);

// Hardy stability against a |k.Theta| <= eps/(1+s^2) bending perturbation.
struct StabilityStudyConfig {
  ModelSpec model;  // the twisted, unbent base model
  std::vector<double> eps_ladder;
  MeshRung mesh;
  SolverSettings solver;
  double e1_tolerance = 1e-3;
};
Verdict stability_study(const StabilityStudyConfig& config);

// Weyl quasimodes: the discrete H_{-1}-type residual r_n decreases along the
// support-drifting sequence.
struct QuasimodeStudyConfig {
  ModelSpec model;  // asymptotically flat
  std::vector<int> n_ladder;
  double eta_energy = 0.0;  // absolute energy; >= E_1
  MeshRung mesh;            // window must contain all supports
  SolverSettings solver;
};
Verdict quasimode_study(const QuasimodeStudyConfig& config);

// Thin-strip limit: e(a) = |lambda_1(H) - E_1 - mu_1(H_eff)| across an
// a-ladder, with Richardson extrapolation on both sides; also the
// sup-norm decay of V_a - V_eff.
struct ThinSweepConfig {
  ModelSpec model;
  std::vector<double> a_ladder;  // decreasing
  double S = 0.0;
  int ns = 0, nt = 0;  // base mesh at each rung; refined once internally
  SolverSettings solver;
  double slope_lo = 0.8, slope_hi = 1.5;
};
Verdict thin_limit_sweep(const ThinSweepConfig& config);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Samples a separable-ish function on the unknowns of a 2D form.
std::vector<double> sample_on_form(const DiscreteForm& form,
                                   const std::function<double(double, double)>& fn);

}  // namespace strips
