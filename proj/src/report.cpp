#include "mmspace/report.hpp"

#include <cmath>

namespace mms {

using nlohmann::json;

namespace {

// JSON has no infinity; write it as the string "inf".
json num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return nullptr;
  return x;
}

std::string id_of(const DiscreteSpace& space, VertexId v) { return space.vertex(v).id; }

json ids(const DiscreteSpace& space, const VertexSet& set) {
  json out = json::array();
  for (VertexId v : set) out.push_back(id_of(space, v));
  return out;
}

}  // namespace

json region_json(const DiscreteSpace& space, const Region& region, bool members) {
  json j = {{"kind", to_string(region.kind)},
            {"size", region.size()},
            {"measure", num(region.measure)},
            {"r1", num(region.r1)},
            {"r2", num(region.r2)}};
  if (region.center) j["center"] = id_of(space, *region.center);
  if (members) j["members"] = ids(space, region.members);
  return j;
}

json report_json(const DiscreteSpace& space, const BGReport& r) {
  return {{"base", id_of(space, r.base)},
          {"family", r.family},
          {"s1", r.params.s1()},
          {"s2", r.params.s2()},
          {"r1", r.params.r1()},
          {"r2", r.params.r2()},
          {"lhs", num(r.lhs)},
          {"rhs_unit", num(r.rhs_unit)},
          {"implied_C", num(r.implied_C)},
          {"infinite", r.infinite},
          {"mesh_slack", r.mesh_slack},
          {"U", region_json(space, r.U, true)},
          {"shadow", region_json(space, r.shadow)}};
}

json report_json(const DiscreteSpace& space, const BGCheck& check, std::size_t max_violations) {
  json v = json::array();
  for (std::size_t i = 0; i < check.violations.size() && i < max_violations; ++i)
    v.push_back(report_json(space, check.violations[i]));
  return {{"configurations", check.configurations},
          {"violation_count", check.violations.size()},
          {"max_implied_C", num(check.max_implied_C)},
          {"max_mesh_slack", check.max_mesh_slack},
          {"violations", v}};
}

json report_json(const DiscreteSpace& space, const MinCEstimate& e) {
  json j = {{"min_C", num(e.value)}, {"mesh_slack", e.mesh_slack}, {"configurations", e.configurations}};
  j["witness"] = e.witness ? report_json(space, *e.witness) : json(nullptr);
  return j;
}

json report_json(const DiscreteSpace& space, const CutProfile& p) {
  json verdicts = json::array();
  for (auto v : p.verdicts) verdicts.push_back(to_string(v));
  json j = {{"point", id_of(space, p.point)},
            {"radii", p.radii},
            {"counts", p.counts},
            {"degree", p.degree_estimate},
            {"is_local_cut", p.is_local_cut},
            {"verdicts", verdicts}};
  auto largest = p.largest_cut_radius();
  j["largest_cut_radius"] = largest ? json(*largest) : json(nullptr);
  if (!space.vertex(p.point).tag.empty()) j["tag"] = space.vertex(p.point).tag;
  return j;
}

json report_json(const DiscreteSpace& space, const RCutResult& r) {
  json failed = json::array();
  for (auto v : r.failed) failed.push_back(to_string(v));
  json comps = json::array();
  for (const auto& c : r.components) comps.push_back(region_json(space, c));
  return {{"point", id_of(space, r.point)},
          {"r", r.r},
          {"verdict", to_string(r.verdict)},
          {"failed", failed},
          {"component_count", r.component_count},
          {"degree", r.degree},
          {"components", comps}};
}

json report_json(const DiscreteSpace& space, const DiamReport& r) {
  json comps = json::array();
  for (const auto& c : r.components) {
    json cj = {{"component_size", c.component_size},
               {"sphere_size", c.sphere_size},
               {"diameter", c.diameter},
               {"violation", c.violation}};
    if (c.witness_a) cj["witness"] = {id_of(space, *c.witness_a), id_of(space, *c.witness_b)};
    comps.push_back(cj);
  }
  return {{"point", id_of(space, r.point)},
          {"r", r.r},
          {"k", r.k},
          {"n", r.n},
          {"C", r.C},
          {"delta", r.delta},
          {"bound", r.bound},
          {"mesh_slack", r.mesh_slack},
          {"applicable", r.applicable},
          {"reason", r.reason},
          {"violation", r.violation},
          {"components", comps}};
}

json report_json(const DiscreteSpace& space, const PoincareReport& r) {
  return {{"center", id_of(space, r.center)},
          {"r", r.r},
          {"p", r.p},
          {"family", r.family},
          {"lhs", num(r.lhs)},
          {"rhs_unit", num(r.rhs_unit)},
          {"implied_CP", num(r.implied_CP)},
          {"infinite", r.infinite},
          {"ball_measure", r.ball_measure},
          {"ball_size", r.ball_size}};
}

json report_json(const DiscreteSpace& space, const CPEstimate& e) {
  json j = {{"C_P", num(e.value)}, {"infinite", e.infinite}, {"configurations", e.configurations}};
  j["witness"] = e.witness ? report_json(space, *e.witness) : json(nullptr);
  return j;
}

json report_json(const DecayFit& f) {
  return {{"exponent", f.exponent},
          {"log_c", f.intercept},
          {"residual", f.residual},
          {"radii", f.radii},
          {"measures", f.measures}};
}

json report_json(const CoveringProfile& p) {
  return {{"deltas", p.deltas},
          {"covering", p.covering},
          {"separated", p.separated},
          {"slope", p.slope},
          {"log_c", p.intercept},
          {"residual", p.residual}};
}

json report_json(const DiscreteSpace& X, const DiscreteSpace& Y, const GHBounds& b) {
  json pairs = json::array();
  for (const auto& [x, y] : b.correspondence) pairs.push_back({id_of(X, x), id_of(Y, y)});
  return {{"lower", b.lower}, {"upper", b.upper}, {"exact", b.exact}, {"correspondence", pairs}};
}

}  // namespace mms
