#pragma once

#include <nlohmann/json.hpp>

#include "mmspace/bishop_gromov.hpp"
#include "mmspace/cut_points.hpp"
#include "mmspace/dimension.hpp"
#include "mmspace/poincare.hpp"
#include "mmspace/space.hpp"

namespace mms {

// Stable JSON shapes for the CLI and the Python layer. Vertices are written
// by id; sets by size and measure, with members only when `members` is set.

inline constexpr const char* kToolName = "mmspace";
inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::json region_json(const DiscreteSpace& space, const Region& region, bool members = false);
nlohmann::json report_json(const DiscreteSpace& space, const BGReport& report);
nlohmann::json report_json(const DiscreteSpace& space, const BGCheck& check, std::size_t max_violations = 20);
nlohmann::json report_json(const DiscreteSpace& space, const MinCEstimate& estimate);
nlohmann::json report_json(const DiscreteSpace& space, const CutProfile& profile);
nlohmann::json report_json(const DiscreteSpace& space, const RCutResult& result);
nlohmann::json report_json(const DiscreteSpace& space, const DiamReport& report);
nlohmann::json report_json(const DiscreteSpace& space, const PoincareReport& report);
nlohmann::json report_json(const DiscreteSpace& space, const CPEstimate& estimate);
nlohmann::json report_json(const DecayFit& fit);
nlohmann::json report_json(const CoveringProfile& profile);
nlohmann::json report_json(const DiscreteSpace& X, const DiscreteSpace& Y, const GHBounds& bounds);

}  // namespace mms
