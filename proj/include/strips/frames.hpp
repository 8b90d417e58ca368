#pragma once

#include <string>
#include <vector>

#include "strips/curves.hpp"

namespace strips {

// Relatively parallel adapted frame samples: rows T, N_1..N_n per node, plus
// the curvature vector k_j = T'.N_j.
struct Frame {
  SGrid grid;
  int dim = 0;                      // n+1
  std::vector<double> T;            // count*dim
  std::vector<std::vector<double>> N;  // n arrays of count*dim
  CurvatureVector k;

  int n() const { return dim - 1; }
  const double* tangent(int i) const { return T.data() + static_cast<std::size_t>(i) * dim; }
  const double* normal(int j, int i) const {
    return N[j].data() + static_cast<std::size_t>(i) * dim;
  }
  // max over nodes of the orthonormality defect |G - I|_max of (T,N_1..N_n)
  double max_orthonormality_defect() const;
};

// Chart bookkeeping from the frame construction: on [start,end] the chart
// coordinate is `axis` and T_axis^2 stays above the switch threshold.
struct ChartPlan {
  struct Segment {
    int start, end, axis;
  };
  std::vector<Segment> segments;
  double switch_threshold = 0.0;
};

struct RpafOptions {
  int max_segment_nodes = 0;  // 0 = unlimited; small caps force extra charts
};

struct RpafResult {
  Frame frame;
  ChartPlan plan;
};

// Builds the relatively parallel adapted frame through a given orthonormal
// set of initial normals at node s_index0: chart selection, auxiliary
// normals, modified Gram-Schmidt, per-segment rotation ODE (RK4 + polar
// re-orthogonalization), segments patched through matched joint conditions.
RpafResult build_rpaf(const Curve& curve, const std::vector<double>& initial_normals,
                      int s_index0, const RpafOptions& options = {});

// Deterministic orthonormal completion of the tangent at one node; rows are
// usable as initial_normals.
std::vector<double> default_initial_normals(const Curve& curve, int s_index0);

struct FrenetFrame2D {
  SGrid grid;
  std::vector<double> normal;            // count*2, N = (-T_2, T_1)
  std::vector<double> signed_curvature;  // count
};

FrenetFrame2D frenet_frame_2d(const Curve& curve);

struct FrenetFrame3D {
  SGrid grid;
  std::vector<double> T;   // count*3
  std::vector<double> M1;  // principal normal
  std::vector<double> M2;  // binormal
  std::vector<double> kappa;
  std::vector<double> tau;
};

// Requires dim == 3 and kappa > kappa_min at every node.
FrenetFrame3D frenet_frame_3d(const Curve& curve, double kappa_min = 1e-8);

// k_j(s_i) = T'(s_i).N_j(s_i) by finite differences on the frame samples.
CurvatureVector curvature_from_frame(const Frame& frame);

void write_frame_csv(const Frame& frame, const std::string& path);
std::string chart_plan_json(const ChartPlan& plan);

}  // namespace strips
