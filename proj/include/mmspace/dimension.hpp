#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mmspace/space.hpp"

namespace mms {

// Greedy over a seeded vertex order: pairwise distances >= eps and every
// vertex within eps of the set.
VertexSet maximal_separated_set(const DiscreteSpace& space, double eps, std::uint64_t seed = 1);

// Centers of a greedy cover by balls of radius delta, visiting vertices in a
// seeded random order (index order is biased by lattice resonance). A vertex
// is covered when d <= delta - h/2, i.e. its mesh cell lies inside the ball.
VertexSet greedy_cover(const DiscreteSpace& space, double delta, std::uint64_t seed = 1);
std::size_t covering_number(const DiscreteSpace& space, double delta, std::uint64_t seed = 1);

// omega_s sum (diam U_i / 2)^s over the Voronoi cells of a delta/2 greedy
// cover; each cell has diameter at most delta + h. Upper bound on H^s_delta.
double hausdorff_measure_estimate(const DiscreteSpace& space, double s, double delta, std::uint64_t seed = 1);

struct HausdorffProfile {
  std::vector<double> deltas;    // increasing
  std::vector<double> raw;
  std::vector<double> envelope;  // min of raw over smaller scales, nonincreasing in delta
};

HausdorffProfile hausdorff_measure_profile(const DiscreteSpace& space, double s, std::vector<double> deltas,
                                           std::uint64_t seed = 1);

struct CoveringProfile {
  std::vector<double> deltas;
  std::vector<std::size_t> covering;   // N(delta)
  std::vector<std::size_t> separated;  // size of a maximal 2 delta-separated set
  double slope = 0.0;                  // of log N against log(1/delta)
  double intercept = 0.0;
  double residual = 0.0;
};

// Empty grid: 8 log-spaced scales from 2.5h to 30.5h (capped at a quarter of
// the eccentricity of vertex 0), snapped to half-integer multiples of h.
CoveringProfile dimension_estimate(const DiscreteSpace& space, std::vector<double> scale_grid = {},
                                   std::uint64_t seed = 1);

double hausdorff_distance(const DiscreteSpace& space, const Region& a, const Region& b);

struct GHOptions {
  std::size_t budget = 36;  // largest |X| |Y| searched exhaustively
  bool allow_heuristic = false;
};

struct GHBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
  // Optimal (or heuristic) correspondence as (x, y) index pairs.
  std::vector<std::pair<VertexId, VertexId>> correspondence;
};

// d_GH as half the minimal distortion of a correspondence.
GHBounds gh_distance_small(const DiscreteSpace& X, const DiscreteSpace& Y, const GHOptions& options = {});

// max |dX(a,b) - dY(c,d)| over pairs (a,c), (b,d) in the relation.
double distortion(const std::vector<std::vector<double>>& dx, const std::vector<std::vector<double>>& dy,
                  const std::vector<std::pair<VertexId, VertexId>>& relation);

struct EpsilonVerdict {
  bool pass = false;
  bool distortion_ok = false;  // (i)
  bool coverage_ok = false;    // (ii)
  double worst_distortion = 0.0;
  std::optional<std::pair<VertexId, VertexId>> worst_pair;  // X vertices
  double worst_coverage = 0.0;
  std::optional<VertexId> worst_uncovered;  // Y vertex
};

// phi maps X vertex indices to Y vertex indices.
EpsilonVerdict check_epsilon_approximation(const DiscreteSpace& X, const DiscreteSpace& Y,
                                           const std::vector<VertexId>& phi, double eps);

}  // namespace mms
