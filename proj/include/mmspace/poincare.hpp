#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmspace/space.hpp"

namespace mms {

struct ScalarField {
  std::vector<double> values;  // indexed by vertex
  std::string name;
};

enum class GradientKind { local_slope, supplied };

struct GradientField {
  std::vector<double> values;
  GradientKind kind = GradientKind::supplied;
};

// max over graph neighbours y of |u(x) - u(y)| / d(x, y); 0 at isolated vertices.
GradientField local_slope(const DiscreteSpace& space, const ScalarField& u);

struct PathSample {
  std::size_t shortest_paths = 64;
  std::size_t random_walks = 64;
  std::size_t walk_steps = 64;
  std::uint64_t seed = 1;
};

struct PathViolation {
  std::vector<VertexId> path;
  double oscillation = 0.0;  // |u(end) - u(start)|
  double integral = 0.0;     // trapezoid sum of g along the path
  double slack = 0.0;
};

// Paths where |u(end) - u(start)| exceeds the integral of g by more than 2h max g.
std::vector<PathViolation> verify_upper_gradient(const DiscreteSpace& space, const ScalarField& u,
                                                 const GradientField& g, const PathSample& sample = {});

struct PoincareReport {
  VertexId center = 0;
  double r = 0.0;
  double p = 1.0;
  double lhs = 0.0;       // mean of |u - u_B| over the ball
  double rhs_unit = 0.0;  // r (mean of g^p)^(1/p)
  double implied_CP = 0.0;
  bool infinite = false;  // g vanishes on the ball while u does not
  double ball_measure = 0.0;
  std::size_t ball_size = 0;
  std::string family;
};

// Ball is the open ball B_r(x).
PoincareReport poincare_ratio(const DiscreteSpace& space, const ScalarField& u, const GradientField& g,
                              VertexId x, double r, double p);

enum class TestFamily { distance, u_N };

std::string to_string(TestFamily family);
TestFamily test_family_from_string(const std::string& name);

struct PoincareSample {
  std::vector<VertexId> centers;
  std::size_t center_count = 8;  // seeded centers added to `centers`
  std::vector<double> radii;     // empty: R, R/2, R/4, R/8 above 4h
  std::vector<double> N_grid;    // empty: derived from the collar radii, plus infinity
  std::size_t distance_sources = 4;
  std::uint64_t seed = 1;
};

struct CPEstimate {
  double value = 0.0;
  bool infinite = false;
  std::optional<PoincareReport> witness;
  std::size_t configurations = 0;
};

// Largest implied_CP over the sampled test functions (with g = local_slope(u)),
// centers and radii r <= R. u_N configurations are skipped where x does not
// split its ball.
CPEstimate estimate_CP(const DiscreteSpace& space, double p, double R, const std::vector<TestFamily>& families,
                       const PoincareSample& sample = {});

struct Witness {
  ScalarField u;
  GradientField g;
  double N = 0.0;
  std::array<double, 2> component_measure{};  // mu(O_1), mu(O_2)
  std::array<double, 2> collar_radius{};      // 1 / (N mu(O_i))
};

// The two-sided test function built from the two heaviest components O_1, O_2
// of B_r(x) minus x: +-1/mu(O_i) outside the collar of radius 1/(N mu(O_i)),
// +-N d(x, .) inside it, 0 on other components. Outside the ball each vertex
// copies the value of its nearest ball vertex. N may be infinite.
// Throws DomainError when x does not split its ball.
Witness split_witness(const DiscreteSpace& space, VertexId x, double r, double N);

struct DecayFit {
  double exponent = 0.0;
  double intercept = 0.0;  // log c
  double residual = 0.0;   // rms of the log residuals
  std::vector<double> radii;
  std::vector<double> measures;
};

// Least-squares fit of log mu(B_r(x)) against log r over radii >= 4h.
// The ball counts vertices with d < r. Empty grid: 10 log-spaced radii from
// 4h to half the eccentricity.
DecayFit volume_decay_exponent(const DiscreteSpace& space, VertexId x, std::vector<double> radius_grid = {});

}  // namespace mms
