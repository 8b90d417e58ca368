#pragma once

#include <map>
#include <string>
#include <vector>

namespace strips {

// Uniform arc-length grid s_i = s0 + i*ds.
struct SGrid {
  double s0 = 0.0;
  double ds = 1.0;
  int count = 2;

  double node(int i) const { return s0 + i * ds; }
  double s_end() const { return node(count - 1); }
  bool same_as(const SGrid& o, double tol = 1e-12) const;
  void validate() const;  // throws on ds <= 0 or count < 2
};

// Arc-length-parameterized curve samples in R^{n+1}: points Gamma(s_i) and
// unit tangents T(s_i), stored node-major.
struct Curve {
  int dim = 0;  // n+1 >= 2
  SGrid grid;
  std::vector<double> points;    // count*dim
  std::vector<double> tangents;  // count*dim

  const double* point(int i) const { return points.data() + static_cast<std::size_t>(i) * dim; }
  const double* tangent(int i) const {
    return tangents.data() + static_cast<std::size_t>(i) * dim;
  }
  // max_i | |T(s_i)| - 1 |
  double max_tangent_norm_defect() const;
  // max interior deviation of (Gamma_{i+1}-Gamma_{i-1})/(2 ds) from T_i
  double max_tangent_consistency_defect() const;
  void validate(double tol = 1e-9) const;
};

// Components of the curvature vector k(s_i) in a relatively parallel frame,
// node-major with n entries per node.
struct CurvatureVector {
  SGrid grid;
  int n = 0;
  std::vector<double> k;  // count*n

  const double* at(int i) const { return k.data() + static_cast<std::size_t>(i) * n; }
  double norm_at(int i) const;
  void validate() const;  // finite entries
};

enum class CurveFamily { line, circle, helix };

CurveFamily curve_family_from_string(const std::string& name);

// Analytic test-fixture curves sampled exactly at the grid nodes.
// circle: params["radius"]; helix: params["radius"], params["pitch"] (dim>=3).
Curve make_analytic_curve(CurveFamily family, const std::map<std::string, double>& params,
                          int dim, const SGrid& grid);

// kappa(s_i) = |T'(s_i)|, central differences inside, one-sided second order
// at the ends.
std::vector<double> curvature_of(const Curve& curve);

struct Frame;  // frames.hpp

// Integrates the frame system T' = sum k_j N_j, N_j' = -k_j T together with
// Gamma' = T by RK4 (k piecewise linear between nodes), re-orthonormalizing
// the frame rows each step. initial_frame is (n+1)x(n+1) row-major with rows
// (T, N_1..N_n) at the first grid node.
std::pair<Curve, Frame> synthesize_from_curvature(const CurvatureVector& k,
                                                  const std::vector<double>& initial_frame,
                                                  const std::vector<double>& origin);

void write_curve_csv(const Curve& curve, const std::string& path);
Curve read_curve_csv(const std::string& path);

}  // namespace strips
