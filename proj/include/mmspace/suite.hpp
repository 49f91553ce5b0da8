#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmspace/bishop_gromov.hpp"
#include "mmspace/space.hpp"
#include "mmspace/zoo.hpp"

namespace mms {

struct LoadedSpace {
  DiscreteSpace space;
  std::optional<ZooSpec> zoo;  // set when the source was a zoo string
  std::string source;
};

// "zoo:NAME?k=v&..." generates; anything else is read as a space file.
LoadedSpace load_source(const std::string& source);

enum class RecordStatus { pass, model_violation, not_applicable };

// "pass", "model violation - inspect slack", "not applicable". A failing
// conclusion under verified hypotheses points at the discretization or the
// implementation, so no record ever reads as a refutation.
std::string to_string(RecordStatus status);

struct TheoremRecord {
  std::string name;
  std::string claim;
  bool hypotheses_hold = false;
  std::string hypotheses;
  std::optional<bool> conclusion_holds;  // empty when not evaluated
  RecordStatus status = RecordStatus::not_applicable;
  double declared_slack = 0.0;
  nlohmann::json data = nlohmann::json::object();

  // A failed conclusion is consistent when some hypothesis also fails.
  bool consistent() const { return !(hypotheses_hold && conclusion_holds == false); }
};

struct SuiteOptions {
  double k = 0.0;
  std::optional<double> n;  // default: 1 for curve families, 2 for planar lattices
  std::optional<double> C;  // default: the estimated minimal C
  double p = 2.0;
  std::optional<double> R;  // default: a quarter of the eccentricity of a central vertex
  std::uint64_t seed = 1;
  std::size_t max_cut_points = 8;
  std::size_t refinements = 3;
  std::size_t max_refined_vertices = 300000;
  SamplingPlan plan;
};

struct SuiteResult {
  double k = 0.0, n = 1.0, C = 1.0, R = 1.0;
  bool C_estimated = false;
  MinCEstimate min_c;
  BGCheck bg;
  std::vector<TheoremRecord> records;
};

// Least eccentric of vertex 0 and 32 seeded samples.
VertexId central_vertex(const DiscreteSpace& space, std::uint64_t seed = 1);

// Default model dimension for a space, from its generator metadata.
double default_dimension(const DiscreteSpace& space);

// Runs every record. `zoo` enables the refinement-based Poincare record.
SuiteResult theorem_suite(const DiscreteSpace& space, const SuiteOptions& options = {},
                          const std::optional<ZooSpec>& zoo = std::nullopt);

nlohmann::json suite_json(const DiscreteSpace& space, const SuiteResult& result);

}  // namespace mms
