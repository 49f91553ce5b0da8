#include "mmspace/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mmspace/errors.hpp"

namespace mms {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_small_integer(double n) { return n == std::floor(n) && n >= 0.0 && n <= 64.0; }

// x^m by repeated multiplication; keeps power-of-two rescaling exact.
double int_power(double x, int m) {
  double result = 1.0;
  double base = x;
  while (m > 0) {
    if (m & 1) result *= base;
    base *= base;
    m >>= 1;
  }
  return result;
}

double power(double x, double e) {
  if (is_small_integer(e)) return int_power(x, static_cast<int>(e));
  return std::pow(x, e);
}

void check_radii(double k, double r1, double r2) {
  if (!(r1 >= 0.0) || !(r2 >= r1) || !std::isfinite(r2)) {
    std::ostringstream out;
    out << "volume needs 0 <= r1 <= r2, got (" << r1 << ", " << r2 << ")";
    throw ParameterError(out.str());
  }
  if (k > 0.0) {
    double limit = kPi / std::sqrt(k);
    if (r2 > limit * (1.0 + 1e-12)) {
      std::ostringstream out;
      out << "radius " << r2 << " exceeds the model diameter pi/sqrt(k) = " << limit;
      throw DomainError(out.str());
    }
  }
}

struct SimpsonState {
  double k;
  double exponent;
  double tolerance;
  double error = 0.0;
};

double integrand(const SimpsonState& st, double t) { return power(s_k(st.k, t), st.exponent); }

double simpson_step(SimpsonState& st, double a, double fa, double b, double fb, double m, double fm, double whole,
                    double tol, int depth, int min_depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = integrand(st, lm), frm = integrand(st, rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth >= min_depth && (std::abs(delta) <= 15.0 * tol || depth >= 50)) {
    st.error += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_step(st, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1, min_depth) +
         simpson_step(st, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1, min_depth);
}

}  // namespace

void ComparisonParams::validate() const {
  if (!(n >= 1.0)) throw ParameterError("dimension parameter n must be >= 1");
  if (!(C >= 1.0)) throw ParameterError("constant C must be >= 1");
  if (!(R > 0.0)) throw ParameterError("radius cap R must be positive");
  if (k > 0.0 && R > kPi / std::sqrt(k)) throw DomainError("radius cap exceeds pi/sqrt(k)");
}

std::string to_string(VolumeMethod method) {
  return method == VolumeMethod::closed_form ? "closed_form" : "quadrature";
}

double s_k(double k, double t) {
  if (k > 0.0) {
    double root = std::sqrt(k);
    return std::sin(root * t) / root;
  }
  if (k < 0.0) {
    double root = std::sqrt(-k);
    return std::sinh(root * t) / root;
  }
  return t;
}

double gamma_fn(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("gamma_fn requires s > 0");
  return std::tgamma(s);
}

double unit_ball_volume(double s) {
  if (!(s >= 0.0)) throw DomainError("unit ball volume requires s >= 0");
  return std::pow(kPi, 0.5 * s) / gamma_fn(0.5 * s + 1.0);
}

double unit_sphere_area(double n) {
  if (!(n > 0.0)) throw DomainError("sphere area requires n > 0");
  return 2.0 * std::pow(kPi, 0.5 * n) / gamma_fn(0.5 * n);
}

VolumeValue volume_by_quadrature(double k, double n, double r1, double r2) {
  if (!(n >= 1.0)) throw ParameterError("dimension parameter n must be >= 1");
  check_radii(k, r1, r2);
  VolumeValue out;
  out.method = VolumeMethod::quadrature;
  if (r1 == r2) return out;
  SimpsonState st{k, n - 1.0, 0.0};
  double fa = integrand(st, r1), fb = integrand(st, r2);
  double m = 0.5 * (r1 + r2);
  double fm = integrand(st, m);
  double whole = (r2 - r1) / 6.0 * (fa + 4.0 * fm + fb);
  // Purely relative tolerance so that a power-of-two rescaling of the radii
  // takes every refinement decision identically.
  st.tolerance = whole > 0.0 ? 1e-13 * whole : 1e-14;
  double integral = simpson_step(st, r1, fa, r2, fb, m, fm, whole, st.tolerance, 0, 4);
  double alpha = unit_sphere_area(n);
  out.value = std::max(0.0, alpha * integral);
  out.est_error = alpha * st.error;
  return out;
}

VolumeValue volume(double k, double n, double r1, double r2) {
  if (!(n >= 1.0)) throw ParameterError("dimension parameter n must be >= 1");
  check_radii(k, r1, r2);
  VolumeValue out;
  if (r1 == r2) return out;
  double alpha = unit_sphere_area(n);
  if (k == 0.0) {
    out.value = alpha * (power(r2, n) - power(r1, n)) / n;
    return out;
  }
  if (n == 1.0) {
    out.value = alpha * (r2 - r1);
    return out;
  }
  if (n == 2.0) {
    // integral of s_k = (2/k)(sin^2(a) - sin^2(b)) = (2/k) sin(a+b) sin(a-b), a = sqrt(k) r2/2
    double half_root = 0.5 * std::sqrt(std::abs(k));
    double sum = half_root * (r2 + r1), diff = half_root * (r2 - r1);
    double product = k > 0.0 ? std::sin(sum) * std::sin(diff) : std::sinh(sum) * std::sinh(diff);
    out.value = std::max(0.0, alpha * (2.0 / std::abs(k)) * product);
    return out;
  }
  return volume_by_quadrature(k, n, r1, r2);
}

bool delta_inequality_holds(double k, double n, double C, double R, double delta) {
  if (!(delta > 0.0) || !(delta < 1.0 / 3.0)) return delta == 0.0 && C * C < 2.0;
  const double lo = 1.0 / 3.0 - delta, hi = 1.0 / 3.0 + delta;
  const double e = n - 1.0;
  double worst = C * C * std::pow(hi / lo, e);  // r -> 0 limit
  if (k != 0.0) {
    if (k > 0.0 && hi * R * std::sqrt(k) >= kPi) return false;
    constexpr int kSamples = 256;
    for (int j = 1; j <= kSamples; ++j) {
      double r = R * static_cast<double>(j) / kSamples;
      double den = s_k(k, lo * r);
      if (!(den > 0.0)) return false;
      worst = std::max(worst, C * C * std::pow(s_k(k, hi * r) / den, e));
    }
  }
  return worst < 2.0;
}

namespace {
void check_delta_args(double n, double C, double R) {
  if (!(n > 1.0)) throw DomainError("delta threshold requires n > 1");
  if (!(C >= 1.0)) throw ParameterError("delta threshold requires C >= 1");
  if (!(C < std::sqrt(2.0))) throw DomainError("no threshold exists for C >= sqrt(2)");
  if (!(R > 0.0)) throw ParameterError("delta threshold requires R > 0");
}
}  // namespace

double delta_boundary(double k, double n, double C, double R) {
  check_delta_args(n, C, R);
  if (k == 0.0) {
    double q = std::pow(2.0 / (C * C), 1.0 / (n - 1.0));
    return (q - 1.0) / (3.0 * (q + 1.0));
  }
  double lo = 0.0, hi = 1.0 / 3.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    if (delta_inequality_holds(k, n, C, R, mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double delta_threshold(double k, double n, double C, double R) {
  check_delta_args(n, C, R);
  if (k == 0.0) {
    double q = std::pow(2.0 / (C * C), 1.0 / (n - 1.0));
    return (q - 1.0) / (4.0 * (q + 1.0));
  }
  return 0.75 * delta_boundary(k, n, C, R);
}

}  // namespace mms
