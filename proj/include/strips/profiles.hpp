#pragma once

#include <functional>
#include <string>

namespace strips {

// Standard C-infinity bump: exp(1 - 1/(1-x^2)) on (-1,1), zero outside.
// Peak value 1 at x = 0.
double bump(double x);
double bump_derivative(double x);

// C-infinity step: 0 for x<=0, 1 for x>=1, q(x)/(q(x)+q(1-x)) between.
double smoothstep(double x);

// Cutoff that is 1 on [-1,1] and 0 outside [-2,2], built from smoothstep.
double mollifier_plateau(double x);
double mollifier_plateau_derivative(double x);

// Scalar profile g(s) used for k.Theta and |Theta'| data.
struct Profile {
  enum class Kind { zero, constant, bump, lorentz };
  Kind kind = Kind::zero;
  double height = 0.0;
  double center = 0.0;
  double width = 1.0;  // support length for bump; scale irrelevant for lorentz

  double operator()(double s) const;
  double derivative(double s) const;
  double max_abs() const;

  static Profile zero();
  static Profile constant(double h);
  static Profile bump_profile(double height, double center, double width);
  // height / (1 + (s-center)^2)
  static Profile lorentz(double height, double center);
  static Profile::Kind kind_from_string(const std::string& name);
};

}  // namespace strips
