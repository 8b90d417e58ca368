#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "strips/frames.hpp"
#include "strips/profiles.hpp"

namespace strips {

// Twist direction Theta(s) on the unit sphere of R^n plus its derivative.
struct TwistProfile {
  SGrid grid;
  int n = 0;
  std::vector<double> theta;        // count*n
  std::vector<double> theta_prime;  // count*n

  const double* at(int i) const { return theta.data() + static_cast<std::size_t>(i) * n; }
  const double* prime_at(int i) const {
    return theta_prime.data() + static_cast<std::size_t>(i) * n;
  }
  double rate_at(int i) const;  // |Theta'(s_i)|
  void validate(double tol = 1e-9) const;

  static TwistProfile constant(const SGrid& grid, const std::vector<double>& theta0);
  // Theta rotates at constant rate omega in the (j1,j2) normal plane.
  static TwistProfile rotation(const SGrid& grid, int n, int j1, int j2, double omega,
                               double phase0 = 0.0);
  // Rotation whose rate is a compactly supported bump: rate(s) =
  // height*bump(2(s-center)/width); the angle is the rate's primitive.
  static TwistProfile bump_rotation(const SGrid& grid, int n, int j1, int j2, double height,
                                    double center, double width, double phase0 = 0.0);
  // Node samples; renormalized per node (warning via stderr when the
  // correction exceeds 1e-6), Theta' by central differences.
  static TwistProfile from_samples(const SGrid& grid, int n, std::vector<double> samples);
};

enum class StripProvenance { from_frame_and_twist, direct_profiles };

// Everything the quadratic forms need: half-width a and the two scalar
// profiles k.Theta and |Theta'| over the s-grid. Analytic closures, when the
// model came from analytic profiles, avoid interpolation bias in assembly.
struct StripModel {
  double a = 0.0;
  SGrid grid;
  std::vector<double> kdotTheta;      // per node
  std::vector<double> absThetaPrime;  // per node
  StripProvenance provenance = StripProvenance::direct_profiles;

  std::function<double(double)> kdot_fn;  // optional exact evaluators
  std::function<double(double)> rate_fn;

  double kdot_at(double s) const;
  double rate_at(double s) const;
  double max_abs_kdot() const;
  double max_rate() const;
  double f_at(double s, double t) const;  // Jacobian at arbitrary (s,t)

  static StripModel direct(const SGrid& grid, double a, const Profile& kdot,
                           const Profile& rate);
  static StripModel from_samples(const SGrid& grid, double a, std::vector<double> kdot,
                                 std::vector<double> rate);
};

// Builds the model from a frame and twist on the same grid; validates the
// a*max|k.Theta| < 1 bound and reports the offending node on failure.
StripModel make_strip(const Frame& frame, const TwistProfile& twist, double a);

// f(s_i, t) = sqrt((1 - t k.Theta)^2 + t^2 |Theta'|^2); |t| <= a.
double jacobian_f(const StripModel& model, int s_index, double t);

// -|Theta'(s_i)|^2 / f(s_i,t)^4; always <= 0.
double gauss_curvature(const StripModel& model, int s_index, double t);

struct AssumptionReport {
  bool ass21_ok = false;              // a*max|k.Theta| < 1
  bool hardy_smallness_ok = false;    // a*max|Theta'| <= sqrt(2)
  bool asymptotically_flat_ok = false;  // profile decay over the outer 10%
  bool thin_ass_ok = false;           // finite k.Theta, (k.Theta)', |Theta'|, |Theta''|
  std::vector<long> ass21_witnesses;
  std::vector<long> hardy_witnesses;
  std::vector<long> flat_witnesses;
  std::vector<long> thin_witnesses;
  double sup_kdot = 0.0, sup_rate = 0.0, sup_kdot_prime = 0.0, sup_rate_prime = 0.0;
  double flat_threshold = 0.0;
};

AssumptionReport validate_assumptions(const StripModel& model, double flat_threshold = 1e-3);
std::string assumption_report_json(const AssumptionReport& report);

// Embedded strip samples L(s_i, t_m) with their parameter tags.
struct EmbeddedStrip {
  int dim = 0;
  int ns = 0, nt = 0;
  std::vector<double> s, t;    // per emitted point
  std::vector<double> points;  // (ns*nt)*dim
};

EmbeddedStrip embed(const StripModel& model, const Curve& curve, const Frame& frame,
                    const TwistProfile& twist, int t_samples);

struct InjectivityReport {
  struct Flag {
    int i, j;
    double distance;
  };
  std::vector<Flag> flags;
  double min_separation = 0.0;
  double closest_offending = 0.0;  // smallest distance among flagged pairs
};

// Flags pairs of emitted points whose parameter separation exceeds
// param_factor lattice steps but whose Euclidean distance is below
// min_separation.
InjectivityReport check_injectivity(const EmbeddedStrip& points, double min_separation,
                                    double param_factor = 3.0);

void write_surface_csv(const EmbeddedStrip& strip, const std::string& path);
void write_surface_obj(const EmbeddedStrip& strip, const std::string& path);  // dim 3 only

}  // namespace strips
