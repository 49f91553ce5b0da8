#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mmspace/space.hpp"

namespace mms {

struct ZooSpec {
  std::string family;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;  // no current family is randomized; kept for reproducible echoes
};

struct ZooParam {
  std::string name;
  double default_value;
  double min_value;
  double max_value;
  bool integral;
  std::string help;
};

// Environment variable consulted for the default mesh of every family.
inline constexpr const char* kMeshEnv = "MMSPACE_MESH";

std::vector<std::string> zoo_families();
std::vector<ZooParam> zoo_parameters(const std::string& family);

// Accepts "zoo:NAME?key=value&key=value" or "NAME?key=value".
ZooSpec parse_zoo_spec(const std::string& text);
std::string format_zoo_spec(const ZooSpec& spec);

// Generated spaces record the family, resolved parameters and named points
// (e.g. "center", "origin", "pinch") under meta.
DiscreteSpace generate(const ZooSpec& spec);

// Vertex registered under meta.points[name].
VertexId named_point(const DiscreteSpace& space, const std::string& name);

}  // namespace mms
