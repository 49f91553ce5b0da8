#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mms {

struct RunConfig {
  std::string command;
  std::string space;        // zoo:NAME?k=v&... or a space file
  std::string other_space;  // second space for gh
  double k = 0.0;
  std::optional<double> n;  // default: from the generator metadata
  std::optional<double> C;
  double p = 2.0;
  std::optional<double> R;
  std::vector<double> radii;
  std::string point;  // vertex id or named point
  std::uint64_t seed = 1;
  std::vector<std::string> families;  // set families (check-bg, min-c) or test families (poincare)
  std::string format = "json";        // json | table
  std::string out;
  std::size_t budget = 36;
  bool heuristic = false;
};

struct RunOutcome {
  nlohmann::json envelope;
  int status = 0;  // 0 all pass, 1 violations, 2 error
};

std::vector<std::string> run_commands();

nlohmann::json config_json(const RunConfig& config);

// Never throws for bad input; errors become status 2 with a diagnostic.
// `generate` with a non-empty `out` writes the space file there.
RunOutcome run(const RunConfig& config);

// Aligned columns of the scalar fields of each record.
std::string render_table(const nlohmann::json& envelope);

}  // namespace mms
