#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mmspace/report.hpp"
#include "mmspace/run.hpp"
#include "mmspace/space_io.hpp"
#include "mmspace/suite.hpp"

namespace {

const char* describe(const std::string& command) {
  if (command == "generate") return "Build a zoo space and write it as a space file";
  if (command == "check-bg") return "Search for Bishop-Gromov violations at a given C";
  if (command == "min-c") return "Smallest C consistent with the sampled configurations";
  if (command == "cut-points") return "Local cut points, degrees and r-cut verdicts";
  if (command == "diam-bound") return "Sphere-diameter bound at an r-cut point";
  if (command == "ends") return "Number of ends at a finite scale";
  if (command == "poincare") return "Estimate the Poincare constant";
  if (command == "decay") return "Fit the ball-measure decay exponent at a point";
  if (command == "dim") return "Covering-number dimension estimate";
  if (command == "gh") return "Gromov-Hausdorff distance between two small spaces";
  if (command == "theorem-suite") return "Run every theorem record on one space";
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric measure space verifier"};
  app.set_version_flag("--version", std::string(mms::kToolVersion));
  app.require_subcommand(1);

  mms::RunConfig cfg;
  double n = 0.0, C = 0.0, R = 0.0;
  for (const auto& name : mms::run_commands()) {
    CLI::App* sub = app.add_subcommand(name, describe(name));
    sub->add_option("--space", cfg.space, "zoo:NAME?key=value&... or a space file")->required();
    sub->add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
    sub->add_option("--out", cfg.out, "Write the report (for generate: the space file) here");
    sub->add_option("--format", cfg.format, "json or table")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();
    if (name == "generate") continue;
    sub->add_option("--k", cfg.k, "Curvature parameter")->capture_default_str();
    sub->add_option("--n", n, "Dimension parameter (default from the space metadata)");
    sub->add_option("--C", C, "Comparison constant");
    sub->add_option("--p", cfg.p, "Poincare exponent")->capture_default_str();
    sub->add_option("--R", R, "Scale");
    sub->add_option("--radii", cfg.radii, "Radius or scale grid")->delimiter(',');
    sub->add_option("--point", cfg.point, "Vertex id or named point");
    sub->add_option("--families", cfg.families, "Set families or Poincare test families")->delimiter(',');
    if (name == "gh") {
      sub->add_option("--other", cfg.other_space, "Second space")->required();
      sub->add_option("--budget", cfg.budget, "Largest |X||Y| searched exactly")->capture_default_str();
      sub->add_flag("--heuristic", cfg.heuristic, "Return heuristic bounds beyond the budget");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  if (cfg.command != "generate") {
    if (chosen->count("--n")) cfg.n = n;
    if (chosen->count("--C")) cfg.C = C;
    if (chosen->count("--R")) cfg.R = R;
  }

  // generate without --out prints the space file itself.
  if (cfg.command == "generate" && cfg.out.empty()) {
    try {
      std::cout << mms::to_space_text(mms::load_source(cfg.space).space) << "\n";
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }

  mms::RunOutcome outcome = mms::run(cfg);
  std::string text = cfg.format == "table" ? mms::render_table(outcome.envelope) : outcome.envelope.dump(2) + "\n";
  if (!cfg.out.empty() && cfg.command != "generate") {
    std::ofstream file(cfg.out);
    if (!file) {
      std::cerr << "error: cannot write " << cfg.out << "\n";
      return 2;
    }
    file << text;
  } else {
    std::cout << text;
  }
  if (outcome.status == 2) std::cerr << "error: " << outcome.envelope.value("error", "unknown") << "\n";
  return outcome.status;
}
