#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "mmspace/errors.hpp"
#include "mmspace/space_io.hpp"
#include "mmspace/zoo.hpp"
#include "support/support.hpp"

using namespace mms;
using namespace mms::testing;

namespace {

DiscreteSpace zoo(const std::string& s) { return generate(parse_zoo_spec(s)); }

// Coarse instances of every family, small enough for exhaustive checks.
const std::vector<std::string>& coarse_specs() {
  static const std::vector<std::string> specs = {
      "interval?h=0.05",        "path?L=10&h=0.5",           "cycle?h=0.05",
      "star?d=4&h=0.05",        "spokes?m=3&h=0.02",         "tangent_circles?m=2&h=0.1",
      "comb?m=3&h=0.05",        "circle_plus_ray?h=0.1",     "three_pronged?h=0.25",
      "cusp?alpha=1&h=0.1",     "grid_Rn?n=2&h=0.1",         "grid_Rn?n=3&h=0.25",
      "ladder_teeth?m=3&h=0.05"};
  return specs;
}

bool connected(const DiscreteSpace& s) {
  for (double d : s.distances_from(0))
    if (!std::isfinite(d)) return false;
  return true;
}

}  // namespace

TEST(Zoo, RegistryCoversEveryFamily) {
  auto names = zoo_families();
  for (const char* f : {"interval", "path", "cycle", "star", "spokes", "tangent_circles", "comb", "circle_plus_ray",
                        "three_pronged", "cusp", "grid_Rn", "ladder_teeth"})
    EXPECT_NE(std::find(names.begin(), names.end(), f), names.end()) << f;
  for (const auto& f : names) EXPECT_FALSE(zoo_parameters(f).empty()) << f;
}

TEST(Zoo, IntervalCountAndMeasure) {
  auto s = zoo("interval?L=1&h=0.001");
  EXPECT_EQ(s.size(), 1001u);
  EXPECT_NEAR(s.total_measure(), 1.0, 1e-3);
  EXPECT_EQ(s.meta()["family"], "interval");
}

TEST(Zoo, EveryFamilyIsAValidLengthModel) {
  for (const auto& spec : coarse_specs()) {
    auto s = zoo(spec);
    EXPECT_TRUE(connected(s)) << spec;
    for (const auto& v : s.vertices()) EXPECT_GT(v.weight, 0.0) << spec;
    for (const auto& e : s.edges()) {
      EXPECT_GT(e.length, 0.0) << spec;
      // lattices carry diagonal edges up to sqrt(n) h
      EXPECT_LE(e.length, std::sqrt(3.0) * s.mesh() * (1 + 1e-12)) << spec;
    }
    DefectOptions opt;
    opt.max_pairs = 400;
    EXPECT_LE(length_space_defect(s, opt), s.mesh() * (1 + 1e-9)) << spec;
  }
}

TEST(Zoo, GenerationIsDeterministic) {
  for (const auto& spec : coarse_specs()) EXPECT_EQ(to_space_text(zoo(spec)), to_space_text(zoo(spec))) << spec;
}

TEST(Zoo, SaveLoadRoundTrip) {
  auto dir = std::filesystem::temp_directory_path() / "mmspace_zoo_roundtrip";
  std::filesystem::create_directories(dir);
  for (const auto& spec : coarse_specs()) {
    auto s = zoo(spec);
    auto path = dir / "space.mms";
    save_space(s, path);
    auto back = load_space(path);
    EXPECT_EQ(to_space_text(back), to_space_text(s)) << spec;
    ASSERT_EQ(back.size(), s.size());
    for (VertexId v = 0; v < s.size(); ++v) EXPECT_EQ(back.vertex(v).weight, s.vertex(v).weight);
    for (std::size_t i = 0; i < s.edges().size(); ++i) EXPECT_EQ(back.edges()[i].length, s.edges()[i].length);
  }
  std::filesystem::remove_all(dir);
}

TEST(Zoo, NamedPoints) {
  auto s = zoo("star?d=3&h=0.1");
  EXPECT_NO_THROW(named_point(s, "center"));
  EXPECT_NO_THROW(named_point(s, "tip2"));
  EXPECT_THROW(named_point(s, "tip3"), ParameterError);
  auto c = zoo("cusp?alpha=2&h=0.1");
  EXPECT_EQ(c.vertex(named_point(c, "origin")).tag, "0,0");
}

TEST(Zoo, SpecParsing) {
  auto spec = parse_zoo_spec("zoo:star?d=4&L=2.5");
  EXPECT_EQ(spec.family, "star");
  EXPECT_EQ(spec.params.at("d"), 4.0);
  EXPECT_EQ(spec.params.at("L"), 2.5);
  EXPECT_EQ(parse_zoo_spec(format_zoo_spec(spec)).params, spec.params);
  EXPECT_EQ(parse_zoo_spec("cycle").family, "cycle");
  EXPECT_THROW(parse_zoo_spec("zoo:"), ParseError);
  EXPECT_THROW(parse_zoo_spec("star?d"), ParseError);
  EXPECT_THROW(parse_zoo_spec("star?d=three"), ParseError);
}

TEST(Zoo, ParameterValidation) {
  EXPECT_THROW(zoo("nonesuch"), ParameterError);
  EXPECT_THROW(zoo("star?d=2.5"), ParameterError);
  EXPECT_THROW(zoo("star?d=0"), ParameterError);
  EXPECT_THROW(zoo("interval?h=-1"), ParameterError);
  EXPECT_THROW(zoo("interval?width=3"), ParameterError);
  EXPECT_THROW(zoo("cusp?alpha=50"), ParameterError);
}

TEST(Zoo, MeshFromEnvironment) {
  ::setenv(kMeshEnv, "0.1", 1);
  auto coarse = zoo("interval");
  ::setenv(kMeshEnv, "bogus", 1);
  EXPECT_THROW(zoo("interval"), ParameterError);
  ::unsetenv(kMeshEnv);
  EXPECT_EQ(coarse.size(), 11u);
  EXPECT_EQ(zoo("interval").size(), 101u);
  // an explicit h wins over the environment
  ::setenv(kMeshEnv, "0.1", 1);
  EXPECT_EQ(zoo("interval?h=0.05").size(), 21u);
  ::unsetenv(kMeshEnv);
}

TEST(Zoo, RefinementConvergence) {
  // (family, coarse mesh, named pair)
  struct Case {
    std::string family;
    double h;
    std::string a, b;
  };
  std::vector<Case> cases = {{"interval", 0.02, "left", "third"},
                             {"cycle", 0.02, "start", "antipode"},
                             {"star?d=3", 0.02, "tip0", "tip1"},
                             {"circle_plus_ray", 0.04, "tip", "antipode"},
                             {"grid_Rn?n=2", 0.05, "center", "corner"},
                             {"three_pronged", 0.1, "pinch", "bar_center"},
                             // one named point only: measure check
                             {"cusp?alpha=2", 0.05, "origin", "origin"}};
  for (const auto& c : cases) {
    std::string sep = c.family.find('?') == std::string::npos ? "?" : "&";
    auto coarse = zoo(c.family + sep + "h=" + std::to_string(c.h));
    auto fine = zoo(c.family + sep + "h=" + std::to_string(c.h / 2));
    EXPECT_LE(std::abs(coarse.total_measure() - fine.total_measure()), 2 * c.h) << c.family;
    double dc = coarse.distance(named_point(coarse, c.a), named_point(coarse, c.b));
    double df = fine.distance(named_point(fine, c.a), named_point(fine, c.b));
    EXPECT_LE(std::abs(dc - df), 2 * c.h) << c.family;
  }
}

TEST(Zoo, TruncatedFamiliesGrowWithCount) {
  std::size_t prev = 0;
  for (int m = 1; m <= 4; ++m) {
    auto s = zoo("spokes?m=" + std::to_string(m) + "&h=0.01");
    EXPECT_GT(s.size(), prev);
    prev = s.size();
  }
  EXPECT_GT(zoo("ladder_teeth?m=5&h=0.02").edges().size(), zoo("ladder_teeth?m=4&h=0.02").edges().size());
}
