#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "strips/discretize.hpp"
#include "strips/eigensolve.hpp"
#include "strips/stripgeom.hpp"

namespace strips {

// E_1 = (pi/2a)^2, the transverse Dirichlet threshold.
inline double transverse_threshold(double a) {
  const double x = M_PI / (2.0 * a);
  return x * x;
}

struct LambdaProfile {
  SGrid grid;
  std::vector<double> lambda;
  int mesh_nt = 0;
  bool extrapolated = false;
};

// lambda(s_i) = lowest transverse eigenvalue at s_i minus E_1; Richardson
// extrapolation over nt and 2nt (second order) unless disabled. The
// potential formulation requires k.Theta == 0 on the window.
LambdaProfile lambda_profile(const StripModel& model, int nt, bool use_potential_form,
                             bool extrapolate = true);

struct HardyFloor {
  LambdaProfile profile;
  double min_lambda = 0.0, max_lambda = 0.0;
  int support_begin = -1, support_end = -1;  // node range with lambda above tol
  bool positivity_claim = true;  // false when a*max|Theta'| exceeds sqrt(2)
};

HardyFloor local_hardy_floor(const StripModel& model, const LambdaProfile& profile,
                             double support_tol = 1e-10);

struct EffectivePotential {
  SGrid grid;
  std::vector<double> v_eff;
  double z0 = 0.0;  // -(1/4) max(k.Theta)^2
};

EffectivePotential effective_potential(const StripModel& model);

// Transformed thin-strip tables on an (s,u) lattice, u in (-1,1):
// f_a(s,u) = f(s, a u), its s-derivative, and V_a with the t-derivatives of f
// taken from the closed form.
struct ThinTransformData {
  double a_value = 0.0;
  std::vector<double> s_nodes, u_nodes;
  std::vector<double> f_a, d1_f_a, v_a;  // row-major (s major)
  double sup_f_minus_1 = 0.0, sup_d1_f = 0.0, sup_va_minus_veff = 0.0;
};

ThinTransformData thin_transform_data(const StripModel& model, double a_value,
                                      int u_samples = 65);

// Pointwise V_a(s,u) for a given width (closed-form t derivatives).
double v_a_pointwise(const StripModel& model, double s, double u, double a_value);

struct ProjectionDefectReport {
  double ratio = 0.0;           // |P^perp psi| / |P^perp F|
  double gap_bound = 0.0;       // 4 a^2 / (3 pi^2), from E_j = (j pi / 2a)^2
  double paper_printed = 0.0;   // a^2 / (3 pi^2) as printed in the source
  bool within_bound = false;
  double rhs_perp_norm = 0.0;
};

// Solves (H0_hat - E_1 - z) psi = P^perp F on the transformed straight-type
// form and reports |P^perp psi| / |P^perp F|. Requires z < z0.
ProjectionDefectReport projection_defect(const DiscreteForm& form0, double a_value, double z,
                                         double z0, const std::vector<double>& F,
                                         double cg_tol = 1e-11);

void write_lambda_csv(const LambdaProfile& profile, const std::string& path);
void write_veff_csv(const EffectivePotential& pot, const std::string& path);
void write_thin_tables_csv(const ThinTransformData& data, const std::string& path);

}  // namespace strips
