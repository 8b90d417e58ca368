#pragma once

#include <string>
#include <vector>

#include "strips/linalg/sparse.hpp"
#include "strips/stripgeom.hpp"

namespace strips {

enum class EndCondition { dirichlet, neumann };

// Truncated strip (-S,S) x (-a,a), uniform grid; transverse boundary t = +-a
// carries Dirichlet conditions always, the s ends per EndCondition.
struct Mesh2D {
  double S = 0.0, a = 0.0;
  int ns = 0, nt = 0;  // interior node counts
  double hs() const { return 2.0 * S / (ns + 1); }
  double ht() const { return 2.0 * a / (nt + 1); }
  void validate() const;
};

struct Mesh1D {
  double x0 = 0.0, x1 = 0.0;
  int n = 0;  // interior node count
  double h() const { return (x1 - x0) / (n + 1); }
  double node(int i) const { return x0 + (i + 1) * h(); }
  void validate() const;
};

// Symmetric stiffness K plus diagonal mass, with enough mesh metadata to map
// unknown indices back to grid coordinates. nt == 0 marks a 1D form.
struct DiscreteForm {
  linalg::CsrMatrix K;
  std::vector<double> mass;  // diagonal of M
  EndCondition end_condition = EndCondition::dirichlet;
  double S = 0.0, a = 0.0;
  int ns = 0, nt = 0;
  double hs = 0.0, ht = 0.0;

  int size() const { return K.rows(); }
  bool is_1d() const { return nt == 0; }
  // s-column count (2D): ns for dirichlet ends, ns+2 for neumann
  int s_count() const { return end_condition == EndCondition::dirichlet ? ns : ns + 2; }
  double s_of_column(int i) const {
    const int shift = end_condition == EndCondition::dirichlet ? 1 : 0;
    return -S + (i + shift) * hs;
  }
  double t_of_row(int m) const { return -a + (m + 1) * ht; }
};

// 2D weighted form: K1 sums (1/f)|D_s u|^2 edge terms with f at edge
// midpoints, K2 sums f|D_t u|^2 edge terms; M holds f(s_i,t_m)*hs*ht.
// Neumann ends keep the boundary s-columns as unknowns and simply omit
// exterior difference terms.
DiscreteForm assemble_2d(const StripModel& model, const Mesh2D& mesh, EndCondition ends);

// The K2 block alone (transverse edge terms), for the discrete Poincare
// floor check u^T K2 u >= E1_disc u^T M0 u.
linalg::CsrMatrix assemble_2d_transverse_only(const StripModel& model, const Mesh2D& mesh,
                                              EndCondition ends);

enum class TransverseFormulation { weighted, potential };

// Transverse fiber problem at one s node on (-a,a), Dirichlet. The weighted
// formulation carries f in both K and M; the potential formulation uses
// V = Theta'^2 (2 - t^2 Theta'^2) / (4 f^4) with unit mass weight and
// requires k.Theta = 0 at the node.
DiscreteForm assemble_transverse_1d(const StripModel& model, int s_index, int nt,
                                    TransverseFormulation formulation);

struct EffectiveChoice {
  bool use_v_a = false;  // V_eff when false, the chi_1-averaged V_a otherwise
  double a_value = 0.0;  // used only with use_v_a
};

// 1D operator -d^2/ds^2 + V on (x0,x1) with Dirichlet ends; V is V_eff or
// the transverse average of V_a against chi_1^2 (Simpson, 129 points).
DiscreteForm assemble_effective_1d(const StripModel& model, const Mesh1D& mesh_s,
                                   const EffectiveChoice& which);

// Plain 1D Schroedinger assembly for given potential samples at mesh nodes;
// Neumann ends use trapezoid end weights.
DiscreteForm assemble_schrodinger_1d(const std::vector<double>& potential, const Mesh1D& mesh,
                                     EndCondition ends);

// Straight-type transformed form on (-S,S) x (-1,1): |d_s phi|^2 +
// (1/a^2)|d_u phi|^2 + V_eff(s)|phi|^2 with plain measure. Separable in the
// transverse direction, which the projection-defect check relies on.
DiscreteForm assemble_thin_reference_2d(const StripModel& model, const Mesh2D& mesh_pi,
                                        double a_value);

void write_form_matrix_market(const DiscreteForm& form, const std::string& path);
std::string form_metadata_json(const DiscreteForm& form);

// Closed-form eigenvalue of the discrete 1D Dirichlet Laplacian on an
// interval of length L with n interior nodes (mode j = 1,2,...).
double fd_dirichlet_eigenvalue(double L, int n, int j);

}  // namespace strips
