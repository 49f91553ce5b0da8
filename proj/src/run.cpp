#include "mmspace/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "mmspace/bishop_gromov.hpp"
#include "mmspace/cut_points.hpp"
#include "mmspace/dimension.hpp"
#include "mmspace/errors.hpp"
#include "mmspace/poincare.hpp"
#include "mmspace/report.hpp"
#include "mmspace/space_io.hpp"
#include "mmspace/suite.hpp"

namespace mms {

using nlohmann::json;

namespace {

// Summary copy without vertex lists; the records keep the full witnesses.
json without_members(json j) {
  if (j.is_object()) {
    j.erase("members");
    for (auto& [key, value] : j.items()) value = without_members(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = without_members(value);
  }
  return j;
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

json opt_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

VertexId resolve_point(const DiscreteSpace& space, const std::string& name) {
  const auto& meta = space.meta();
  if (meta.contains("points") && meta["points"].contains(name)) return named_point(space, name);
  if (auto v = space.find(name)) return *v;
  throw ParameterError("unknown point '" + name + "' (neither a named point nor a vertex id)");
}

double require_C(const RunConfig& cfg) {
  if (!cfg.C) throw ParameterError(cfg.command + " needs --C");
  return *cfg.C;
}

SamplingPlan plan_for(const RunConfig& cfg) {
  SamplingPlan plan;
  plan.seed = cfg.seed;
  if (!cfg.families.empty()) {
    plan.families.clear();
    for (const auto& f : cfg.families) plan.families.push_back(set_family_from_string(f));
  }
  return plan;
}

// Highest-degree local cut point, used when a command needs a point and none was given.
VertexId default_cut_point(const DiscreteSpace& space) {
  auto all = find_local_cut_points(space);
  if (all.empty()) throw ParameterError("no local cut point found; pass --point");
  auto best = std::max_element(all.begin(), all.end(), [](const CutProfile& a, const CutProfile& b) {
    return a.degree_estimate < b.degree_estimate;
  });
  return best->point;
}

json space_summary(const LoadedSpace& ls) {
  const auto& s = ls.space;
  return {{"source", ls.source},
          {"vertices", s.size()},
          {"edges", s.edges().size()},
          {"mesh", s.mesh()},
          {"tau", s.tau()},
          {"total_measure", s.total_measure()},
          {"meta", s.meta()}};
}

struct Body {
  json records = json::array();
  json summary = json::object();
  json slacks = json::object();
  int status = 0;
};

Body dispatch(const RunConfig& cfg, const LoadedSpace& ls) {
  const DiscreteSpace& space = ls.space;
  const double n = cfg.n ? *cfg.n : default_dimension(space);
  Body b;
  b.slacks["tau"] = space.tau();
  b.slacks["mesh"] = space.mesh();

  if (cfg.command == "generate") {
    json rec = space_summary(ls);
    if (!cfg.out.empty()) {
      save_space(space, cfg.out);
      rec["written"] = cfg.out;
    }
    b.records.push_back(rec);
  } else if (cfg.command == "check-bg") {
    double C = require_C(cfg);
    auto check = check_bg(space, cfg.k, n, C, plan_for(cfg));
    for (std::size_t i = 0; i < check.violations.size() && i < 20; ++i)
      b.records.push_back(report_json(space, check.violations[i]));
    b.summary = {{"configurations", check.configurations},
                 {"violations", check.violations.size()},
                 {"max_implied_C", check.max_implied_C},
                 {"k", cfg.k},
                 {"n", n},
                 {"C", C}};
    b.slacks["max_mesh_slack"] = check.max_mesh_slack;
    b.status = check.violations.empty() ? 0 : 1;
  } else if (cfg.command == "min-c") {
    auto est = estimate_min_c(space, cfg.k, n, plan_for(cfg));
    b.records.push_back(report_json(space, est));
    b.summary = {{"min_C", est.value}, {"k", cfg.k}, {"n", n}};
    b.slacks["mesh_slack"] = est.mesh_slack;
  } else if (cfg.command == "cut-points") {
    std::size_t cut = 0, max_degree = 0;
    if (!cfg.point.empty()) {
      VertexId x = resolve_point(space, cfg.point);
      auto grid = cfg.radii.empty() ? default_radius_grid(space, x) : cfg.radii;
      auto prof = cut_profile(space, x, grid);
      b.records.push_back(report_json(space, prof));
      for (double r : grid) b.records.push_back(report_json(space, is_r_cut_point(space, x, r)));
      cut = prof.is_local_cut ? 1 : 0;
      max_degree = prof.degree_estimate;
    } else {
      for (const auto& prof : find_local_cut_points(space, cfg.radii)) {
        b.records.push_back(report_json(space, prof));
        ++cut;
        max_degree = std::max(max_degree, prof.degree_estimate);
      }
    }
    b.summary = {{"local_cut_points", cut}, {"max_degree", max_degree}};
  } else if (cfg.command == "diam-bound") {
    double C = require_C(cfg);
    VertexId x = cfg.point.empty() ? default_cut_point(space) : resolve_point(space, cfg.point);
    auto grid = cfg.radii.empty() ? default_radius_grid(space, x) : cfg.radii;
    std::size_t applicable = 0, violations = 0;
    for (double r : grid) {
      auto d = diam_check(space, x, r, cfg.k, n, C);
      applicable += d.applicable ? 1 : 0;
      violations += d.violation ? 1 : 0;
      b.records.push_back(report_json(space, d));
    }
    b.summary = {{"point", space.vertex(x).id}, {"applicable", applicable}, {"violations", violations}};
    b.slacks["sphere_tau"] = 2.0 * space.tau();
    b.status = violations == 0 ? 0 : 1;
  } else if (cfg.command == "ends") {
    VertexId x = cfg.point.empty() ? central_vertex(space, cfg.seed) : resolve_point(space, cfg.point);
    double R = cfg.R ? *cfg.R : std::max(4.0 * space.mesh(), 0.25 * space.eccentricity(x));
    std::size_t ends = ends_at_scale(space, x, R);
    b.records.push_back({{"base", space.vertex(x).id}, {"R", R}, {"ends", ends}});
    b.summary = {{"ends", ends}};
  } else if (cfg.command == "poincare") {
    PoincareSample sample;
    sample.seed = cfg.seed;
    sample.radii = cfg.radii;
    if (!cfg.point.empty()) {
      sample.centers = {resolve_point(space, cfg.point)};
      sample.center_count = 0;
    }
    VertexId base = sample.centers.empty() ? central_vertex(space, cfg.seed) : sample.centers[0];
    double R = cfg.R ? *cfg.R : std::max(4.0 * space.mesh(), 0.25 * space.eccentricity(base));
    std::vector<TestFamily> fams;
    for (const auto& f : cfg.families) fams.push_back(test_family_from_string(f));
    if (fams.empty()) fams = {TestFamily::distance, TestFamily::u_N};
    auto est = estimate_CP(space, cfg.p, R, fams, sample);
    b.records.push_back(report_json(space, est));
    b.summary = {{"C_P", est.infinite ? json("inf") : json(est.value)}, {"p", cfg.p}, {"R", R}};
    b.slacks["upper_gradient"] = "2h max g";
  } else if (cfg.command == "decay") {
    VertexId x = cfg.point.empty() ? default_cut_point(space) : resolve_point(space, cfg.point);
    auto fit = volume_decay_exponent(space, x, cfg.radii);
    json rec = report_json(fit);
    rec["point"] = space.vertex(x).id;
    b.records.push_back(rec);
    b.summary = {{"point", space.vertex(x).id}, {"exponent", fit.exponent}};
  } else if (cfg.command == "dim") {
    auto prof = dimension_estimate(space, cfg.radii, cfg.seed);
    b.records.push_back(report_json(prof));
    b.summary = {{"dimension", prof.slope}};
    if (cfg.n) {
      const double slack = 0.2;
      b.slacks["dimension"] = slack;
      b.summary["n"] = *cfg.n;
      b.summary["within_bound"] = prof.slope <= *cfg.n + slack;
      b.status = prof.slope <= *cfg.n + slack ? 0 : 1;
    }
  } else if (cfg.command == "gh") {
    if (cfg.other_space.empty()) throw ParameterError("gh needs --other");
    auto other = load_source(cfg.other_space);
    GHOptions o;
    o.budget = cfg.budget;
    o.allow_heuristic = cfg.heuristic;
    auto bounds = gh_distance_small(space, other.space, o);
    b.records.push_back(report_json(space, other.space, bounds));
    b.summary = {{"lower", bounds.lower}, {"upper", bounds.upper}, {"exact", bounds.exact}};
  } else if (cfg.command == "theorem-suite") {
    SuiteOptions o;
    o.k = cfg.k;
    o.n = cfg.n;
    o.C = cfg.C;
    o.p = cfg.p;
    o.R = cfg.R;
    o.seed = cfg.seed;
    o.plan = plan_for(cfg);
    auto res = theorem_suite(space, o, ls.zoo);
    json full = suite_json(space, res);
    std::size_t pass = 0, na = 0, bad = 0;
    for (const auto& r : res.records) {
      json rec = {{"name", r.name},
                  {"status", to_string(r.status)},
                  {"hypotheses_hold", r.hypotheses_hold},
                  {"conclusion_holds", r.conclusion_holds ? json(*r.conclusion_holds) : json(nullptr)},
                  {"consistent", r.consistent()},
                  {"declared_slack", r.declared_slack},
                  {"hypotheses", r.hypotheses},
                  {"claim", r.claim},
                  {"data", r.data}};
      b.records.push_back(rec);
      b.slacks[r.name] = r.declared_slack;
      switch (r.status) {
        case RecordStatus::pass: ++pass; break;
        case RecordStatus::not_applicable: ++na; break;
        case RecordStatus::model_violation: ++bad; break;
      }
    }
    b.summary = {{"pass", pass},   {"not_applicable", na},      {"model_violation", bad},
                 {"C", res.C},     {"C_estimated", res.C_estimated}, {"n", res.n},
                 {"R", res.R},     {"min_c", without_members(full["min_c"])},    {"bg", without_members(full["bg"])}};
    b.slacks["bg_mesh_slack"] = res.bg.max_mesh_slack;
    b.status = bad == 0 ? 0 : 1;
  } else {
    throw ParameterError("unknown command '" + cfg.command + "'");
  }
  return b;
}

std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  if (v.is_number_float()) {
    std::ostringstream out;
    out << std::setprecision(6) << v.get<double>();
    return out.str();
  }
  return v.dump();
}

}  // namespace

std::vector<std::string> run_commands() {
  return {"generate", "check-bg", "min-c", "cut-points", "diam-bound", "ends",
          "poincare", "decay",    "dim",   "gh",         "theorem-suite"};
}

json config_json(const RunConfig& c) {
  return {{"command", c.command}, {"space", c.space},   {"other", c.other_space}, {"k", c.k},
          {"n", opt_json(c.n)},   {"C", opt_json(c.C)}, {"p", c.p},               {"R", opt_json(c.R)},
          {"radii", c.radii},     {"point", c.point},   {"seed", c.seed},         {"families", c.families},
          {"format", c.format},   {"out", c.out},       {"budget", c.budget},     {"heuristic", c.heuristic}};
}

RunOutcome run(const RunConfig& config) {
  RunOutcome outcome;
  json& env = outcome.envelope;
  env = {{"tool", kToolName}, {"version", kToolVersion}, {"timestamp", utc_timestamp()}, {"config", config_json(config)}};
  try {
    if (config.format != "json" && config.format != "table")
      throw ParameterError("format must be json or table");
    if (config.space.empty()) throw ParameterError("--space is required");
    LoadedSpace ls = load_source(config.space);
    Body body = dispatch(config, ls);
    outcome.status = body.status;
    env["space"] = space_summary(ls);
    env["space"].erase("meta");
    env["records"] = std::move(body.records);
    env["summary"] = std::move(body.summary);
    env["slacks"] = std::move(body.slacks);
  } catch (const std::exception& e) {
    outcome.status = 2;
    env["records"] = json::array();
    env["summary"] = json::object();
    env["error"] = e.what();
  }
  env["summary"]["status"] = outcome.status;
  env["summary"]["verdict"] = outcome.status == 0 ? "pass" : outcome.status == 1 ? "violations" : "error";
  return outcome;
}

std::string render_table(const json& env) {
  std::ostringstream out;
  out << "# " << env.value("tool", "") << " " << env.value("version", "") << " "
      << env["config"].value("command", "") << " " << env["config"].value("space", "") << "\n";
  if (env.contains("error")) out << "# error: " << env["error"].get<std::string>() << "\n";
  for (const auto& [key, v] : env["summary"].items())
    if (!v.is_structured()) out << "# " << key << " = " << cell(v) << "\n";

  const json& records = env["records"];
  std::vector<std::string> columns;
  for (const auto& rec : records) {
    if (!rec.is_object()) continue;
    for (const auto& [key, v] : rec.items()) {
      if (v.is_structured()) continue;
      if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
    }
  }
  if (columns.empty()) return out.str();
  std::vector<std::vector<std::string>> rows;
  rows.push_back(columns);
  for (const auto& rec : records) {
    std::vector<std::string> row;
    for (const auto& c : columns) row.push_back(rec.contains(c) ? cell(rec[c]) : "");
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width(columns.size(), 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << row[i];
      if (i + 1 < row.size()) out << std::string(width[i] - row[i].size() + 2, ' ');
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace mms
