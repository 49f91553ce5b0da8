#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mmspace/space.hpp"

namespace mms {

// Outcome of the three-condition r-cut test. fail_i: ball minus point is
// connected; fail_ii: component count differs from the degree estimate;
// fail_iii: some component misses the r-sphere.
enum class RCutVerdict { pass, fail_i, fail_ii, fail_iii };

std::string to_string(RCutVerdict verdict);

struct RCutResult {
  VertexId point = 0;
  double r = 0.0;
  RCutVerdict verdict = RCutVerdict::fail_i;
  std::vector<RCutVerdict> failed;  // every condition that failed, in check order
  std::size_t component_count = 0;  // after dropping mesh stubs
  std::size_t degree = 0;           // degree estimate used for condition (ii)
  std::vector<Region> components;   // the counted components
};

struct CutProfile {
  VertexId point = 0;
  std::vector<double> radii;
  std::vector<std::size_t> counts;  // components reaching distance r/2
  std::size_t degree_estimate = 0;
  bool is_local_cut = false;
  std::vector<RCutVerdict> verdicts;

  // Largest grid radius with a passing r-cut verdict.
  std::optional<double> largest_cut_radius() const;
};

// 4h, 8h, 16h, ... up to the eccentricity of x (or max_radius when given).
std::vector<double> default_radius_grid(const DiscreteSpace& space, VertexId x,
                                        std::optional<double> max_radius = std::nullopt);

CutProfile cut_profile(const DiscreteSpace& space, VertexId x, const std::vector<double>& radius_grid);

// When degree is not supplied it is taken from cut_profile over the default grid.
RCutResult is_r_cut_point(const DiscreteSpace& space, VertexId x, double r,
                          std::optional<std::size_t> degree = std::nullopt);

// Profiles of every vertex that is a local cut point on the given grid
// (default {4h, 8h, 16h}).
std::vector<CutProfile> find_local_cut_points(const DiscreteSpace& space, std::vector<double> radius_grid = {});

// Components of X minus the open R-ball that reach distance 2R from base.
std::size_t ends_at_scale(const DiscreteSpace& space, VertexId base, double R);

struct ComponentDiameter {
  std::size_t component_size = 0;
  std::size_t sphere_size = 0;
  double diameter = 0.0;
  std::optional<VertexId> witness_a, witness_b;
  bool violation = false;
};

struct DiamReport {
  VertexId point = 0;
  double r = 0.0;
  double k = 0.0, n = 2.0, C = 1.0;
  double delta = 0.0;
  double bound = 0.0;       // (2 - delta) r
  double mesh_slack = 0.0;  // 2 tau, sphere points can sit tau outside radius r
  bool applicable = false;
  std::string reason;
  std::vector<ComponentDiameter> components;
  bool violation = false;
};

DiamReport diam_check(const DiscreteSpace& space, VertexId x, double r, double k, double n, double C);

enum class BranchVerdict { branch, not_branch };
enum class WeakBranchVerdict { weak_branch, not_weak_branch, vacuous };

std::string to_string(BranchVerdict verdict);
std::string to_string(WeakBranchVerdict verdict);

struct BranchAnchorResult {
  VertexId anchor = 0;
  double eps = 0.0;
  bool split = false;  // two distinct equidistant points beyond x found
  std::optional<std::array<VertexId, 2>> pair;
};

struct BranchReport {
  VertexId point = 0;
  double l = 0.0;
  BranchVerdict verdict = BranchVerdict::not_branch;
  std::vector<BranchAnchorResult> results;
};

// Anchors are vertices at distance l from x (within h/2). Equidistance uses
// tolerance h/2 by default.
BranchReport branch_point_test(const DiscreteSpace& space, VertexId x, double l, const std::vector<double>& eps_grid,
                               std::optional<double> equidistance_tolerance = std::nullopt);

struct WeakBranchReport {
  VertexId point = 0;
  double l = 0.0;
  double eps = 0.0;
  WeakBranchVerdict verdict = WeakBranchVerdict::vacuous;
  std::vector<VertexId> anchors;
  std::size_t pairs_checked = 0;
  // First pair with no shared initial geodesic point: (anchor, x1, x2).
  std::optional<std::array<VertexId, 3>> failing;
};

WeakBranchReport weak_branch_test(const DiscreteSpace& space, VertexId x, double l, double eps);

struct LineArrangement {
  std::array<VertexId, 3> triple{};  // labelled (x1, x2, x3)
  double r = 0.0;
  std::array<std::size_t, 3> inner_sizes{};  // |O_i|: component of x_i's ball toward x1 (O_1 is x1's other side)
  std::array<std::size_t, 3> outer_sizes{};  // |O_i'|
  std::size_t overlap = 0;                   // |O_2' and O_3'|
  bool stands_in_line = false;
};

LineArrangement stands_in_line(const DiscreteSpace& space, VertexId a, VertexId b, VertexId c, double r);

struct AccumulationReport {
  double r = 0.0;
  double delta = 0.0;
  double gate = 0.0;  // delta r / 6
  VertexSet cut_set;
  std::vector<VertexSet> chains;
  std::size_t triples_checked = 0;
  std::vector<std::array<VertexId, 3>> not_in_line;
  std::vector<std::string> labeling_failures;
  VertexSet high_degree;
  VertexSet gap_vertices;  // non r-cut vertices lying between chain members
  bool violation = false;
};

// Enumerates r-cut vertices, groups them by the delta r / 6 gate and checks
// consecutive triples along each chain.
AccumulationReport cut_set_accumulation_check(const DiscreteSpace& space, double r, double delta);

}  // namespace mms
