#pragma once

#include <string>

namespace mms {

struct ComparisonParams {
  double k = 0.0;
  double n = 1.0;
  double C = 1.0;
  double R = 1.0;

  void validate() const;
};

enum class VolumeMethod { closed_form, quadrature };

std::string to_string(VolumeMethod method);

struct VolumeValue {
  double value = 0.0;
  VolumeMethod method = VolumeMethod::closed_form;
  double est_error = 0.0;
};

// sin(sqrt(k) t)/sqrt(k), t, or sinh(sqrt(-k) t)/sqrt(-k).
double s_k(double k, double t);

double gamma_fn(double s);
// Volume of the unit ball in dimension s (any real s >= 0).
double unit_ball_volume(double s);
// Area of the unit sphere S^{n-1}, i.e. 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(double n);

// Model annulus volume between radii r1 < r2 in curvature k, dimension n.
VolumeValue volume(double k, double n, double r1, double r2);
// Same integral forced through adaptive Simpson, for cross-checks.
VolumeValue volume_by_quadrature(double k, double n, double r1, double r2);

// Largest delta with C^2 [s_k((1/3+delta) r) / s_k((1/3-delta) r)]^{n-1} < 2
// for every r in (0, R].
double delta_boundary(double k, double n, double C, double R);

// Threshold used by the diameter bound: the closed form
// (1/4) (q - 1)/(q + 1), q = (2/C^2)^{1/(n-1)}, when k = 0, and 3/4 of
// delta_boundary otherwise (the closed form is exactly 3/4 of the k = 0 boundary).
double delta_threshold(double k, double n, double C, double R);

// True when C^2 [s_k((1/3+delta) r)/s_k((1/3-delta) r)]^{n-1} < 2 on (0, R].
bool delta_inequality_holds(double k, double n, double C, double R, double delta);

}  // namespace mms
