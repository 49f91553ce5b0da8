#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmspace/space.hpp"

namespace mms {

enum class SetFamily { full_annulus, annulus_components, ball_caps, random_subsets, cut_stubs };

std::string to_string(SetFamily family);
SetFamily set_family_from_string(const std::string& name);
std::vector<SetFamily> all_set_families();

struct BGReport {
  VertexId base = 0;
  Region U;
  ShadowParams params{0.0, 1.0, 0.0, 1.0};
  double lhs = 0.0;        // mu(U) / mu(shadow)
  double rhs_unit = 0.0;   // V(r1, r2) / V(s1, s2)
  double implied_C = 0.0;  // lhs / rhs_unit
  bool infinite = false;   // shadow has zero measure while U does not
  Region shadow;
  std::string family;
  double mesh_slack = 0.0;  // 4h / min(s2 - s1, r2 - r1)

  bool pass(double C) const { return !infinite && implied_C <= C; }
  // Pass with the declared discretization allowance.
  bool pass_with_slack(double C) const { return !infinite && implied_C <= C * (1.0 + mesh_slack); }
};

struct SamplingPlan {
  std::uint64_t seed = 1;
  std::vector<double> radii;   // inner radii r1; empty: fractions of the space scale
  std::vector<double> widths;  // r2 - r1; empty: derived
  std::vector<VertexId> bases;
  std::size_t base_count = 8;  // seeded bases added to `bases`
  std::vector<SetFamily> families = all_set_families();
  std::size_t caps_per_annulus = 2;
  std::size_t random_subsets_per_annulus = 2;
  double min_window = 0.0;  // 0: 40h, or a fifth of the space scale if smaller
  std::size_t max_cut_points = 256;
  // Largest radius scanned when sizing stub configurations; 0: the space scale.
  double cut_scale = 0.0;
};

BGReport bg_ratio(const DiscreteSpace& space, VertexId base, const Region& set, const ShadowParams& params,
                  double k, double n);

struct BGCheck {
  std::vector<BGReport> violations;
  std::size_t configurations = 0;
  double max_implied_C = 0.0;
  double max_mesh_slack = 0.0;
};

// Violations are configurations with implied_C > C (1 + mesh_slack).
BGCheck check_bg(const DiscreteSpace& space, double k, double n, double C, const SamplingPlan& plan);

struct MinCEstimate {
  double value = 0.0;
  double mesh_slack = 0.0;  // slack of the maximizing configuration
  std::optional<BGReport> witness;
  std::size_t configurations = 0;
};

MinCEstimate estimate_min_c(const DiscreteSpace& space, double k, double n, const SamplingPlan& plan);

// Ball form mu(B_R)/mu(B_r) <= C V(0,R)/V(0,r), over bases and radius pairs of the plan.
BGCheck check_usual_bg(const DiscreteSpace& space, double k, double n, double C, const SamplingPlan& plan);

struct DoublingSample {
  std::size_t base_count = 16;
  std::uint64_t seed = 1;
};

double doubling_estimate(const DiscreteSpace& space, double R, const DoublingSample& sample = {});

}  // namespace mms
