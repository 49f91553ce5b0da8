#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mmspace/errors.hpp"
#include "mmspace/poincare.hpp"
#include "mmspace/zoo.hpp"
#include "support/support.hpp"

using namespace mms;
using namespace mms::testing;

namespace {

DiscreteSpace zoo(const std::string& s) { return generate(parse_zoo_spec(s)); }

ScalarField distance_field(const DiscreteSpace& s, VertexId from) {
  ScalarField u;
  u.name = "distance";
  for (VertexId v = 0; v < s.size(); ++v) u.values.push_back(s.distance(from, v));
  return u;
}

ScalarField random_field(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  ScalarField u;
  u.name = "random";
  for (std::size_t i = 0; i < n; ++i) u.values.push_back(val(rng));
  return u;
}

GradientField constant_gradient(std::size_t n, double c) {
  GradientField g;
  g.values.assign(n, c);
  return g;
}

}  // namespace

TEST(LocalSlope, ConstantFieldIsFlat) {
  auto s = zoo("star?d=3&h=0.05");
  ScalarField u{std::vector<double>(s.size(), 4.2), "const"};
  for (double g : local_slope(s, u).values) EXPECT_EQ(g, 0.0);
}

TEST(LocalSlope, DistanceOnIntervalHasUnitSlope) {
  auto s = zoo("interval?h=0.01");
  auto g = local_slope(s, distance_field(s, named_point(s, "left")));
  EXPECT_EQ(g.kind, GradientKind::local_slope);
  for (double v : g.values) EXPECT_NEAR(v, 1.0, 1e-9);
}

TEST(LocalSlope, CoordinateOnUnitStarArms) {
  auto s = make_graph(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
  ScalarField u{{0.0, 1.0, 1.0, 1.0}, "radial"};
  auto g = local_slope(s, u);
  for (double v : g.values) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(LocalSlope, MatchesNeighbourMaximumOnRandomGraphs) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = random_graph(rng, 25, 8);
    auto u = random_field(rng, s.size());
    auto g = local_slope(s, u);
    std::vector<double> want(s.size(), 0.0);
    for (const auto& e : s.edges()) {
      double slope = std::abs(u.values[e.u] - u.values[e.v]) / e.length;
      want[e.u] = std::max(want[e.u], slope);
      want[e.v] = std::max(want[e.v], slope);
    }
    for (VertexId v = 0; v < s.size(); ++v) EXPECT_DOUBLE_EQ(g.values[v], want[v]);
  }
}

TEST(UpperGradient, SlopeOfDistanceHasNoViolations) {
  auto s = zoo("interval?h=0.01");
  auto u = distance_field(s, named_point(s, "third"));
  EXPECT_TRUE(verify_upper_gradient(s, u, local_slope(s, u)).empty());
}

TEST(UpperGradient, ZeroGradientIsCaught) {
  auto s = zoo("interval?h=0.01");
  auto u = distance_field(s, named_point(s, "left"));
  auto bad = verify_upper_gradient(s, u, constant_gradient(s.size(), 0.0));
  ASSERT_FALSE(bad.empty());
  EXPECT_GT(bad.front().oscillation, bad.front().integral + bad.front().slack);
}

TEST(UpperGradient, GlobalLipschitzConstantDominates) {
  std::mt19937_64 rng(52);
  auto s = random_graph(rng, 30, 10);
  auto u = random_field(rng, s.size());
  double lip = 0.0;
  for (double g : local_slope(s, u).values) lip = std::max(lip, g);
  EXPECT_TRUE(verify_upper_gradient(s, u, constant_gradient(s.size(), lip)).empty());
}

TEST(UpperGradient, LocalSlopeIsUpperGradientOnRandomGraphs) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 25; ++trial) {
    auto s = random_graph(rng, 30, trial % 6);
    auto u = random_field(rng, s.size());
    PathSample sample;
    sample.seed = trial + 1;
    EXPECT_TRUE(verify_upper_gradient(s, u, local_slope(s, u), sample).empty()) << trial;
  }
}

TEST(PoincareRatio, ConstantFieldGivesZero) {
  auto s = zoo("interval?h=0.01");
  ScalarField u{std::vector<double>(s.size(), 1.0), "const"};
  auto rep = poincare_ratio(s, u, constant_gradient(s.size(), 0.0), named_point(s, "middle"), 0.2, 1.0);
  EXPECT_EQ(rep.lhs, 0.0);
  EXPECT_EQ(rep.implied_CP, 0.0);
  EXPECT_FALSE(rep.infinite);
}

TEST(PoincareRatio, LinearFieldGivesOneHalf) {
  auto s = zoo("interval?h=0.001");
  auto u = distance_field(s, named_point(s, "left"));
  auto g = constant_gradient(s.size(), 1.0);
  for (double p : {1.0, 2.0}) {
    auto rep = poincare_ratio(s, u, g, named_point(s, "middle"), 0.2, p);
    // the open ball loses h/2 at each end
    EXPECT_NEAR(rep.lhs, 0.1, 0.002);
    EXPECT_NEAR(rep.rhs_unit, 0.2, 1e-12);
    EXPECT_NEAR(rep.implied_CP, 0.5, 0.01) << p;
  }
}

TEST(PoincareRatio, MatchesDirectSums) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = random_graph(rng, 25, 6);
    auto d = floyd_warshall(s);
    auto u = random_field(rng, s.size());
    auto g = local_slope(s, u);
    VertexId x = rng() % s.size();
    double r = std::uniform_real_distribution<double>(s.mesh(), 4.0)(rng);
    double p = std::uniform_real_distribution<double>(1.0, 4.0)(rng);
    double W = 0.0, mean = 0.0;
    for (VertexId v = 0; v < s.size(); ++v)
      if (d[x][v] < r - 0.5 * s.mesh()) {
        W += s.vertex(v).weight;
        mean += s.vertex(v).weight * u.values[v];
      }
    if (W == 0.0) {
      EXPECT_THROW(poincare_ratio(s, u, g, x, r, p), ParameterError);
      continue;
    }
    mean /= W;
    double dev = 0.0, gp = 0.0;
    for (VertexId v = 0; v < s.size(); ++v)
      if (d[x][v] < r - 0.5 * s.mesh()) {
        dev += s.vertex(v).weight * std::abs(u.values[v] - mean);
        gp += s.vertex(v).weight * std::pow(g.values[v], p);
      }
    auto rep = poincare_ratio(s, u, g, x, r, p);
    EXPECT_NEAR(rep.lhs, dev / W, 1e-12 * std::max(1.0, dev / W));
    EXPECT_NEAR(rep.rhs_unit, r * std::pow(gp / W, 1.0 / p), 1e-12 * std::max(1.0, rep.rhs_unit));
  }
}

TEST(PoincareRatio, SeparatedStepIsInfinite) {
  // two unit segments joined by a long edge: the step across it has zero slope on the ball's vertices
  auto s = make_graph(4, {{0, 1, 1.0}, {1, 2, 5.0}, {2, 3, 1.0}}, {1.0, 1.0, 1.0, 1.0});
  ScalarField u{{0.0, 0.0, 1.0, 1.0}, "step"};
  auto rep = poincare_ratio(s, u, constant_gradient(4, 0.0), 1, 10.0, 1.0);
  EXPECT_TRUE(rep.infinite);
  EXPECT_TRUE(std::isinf(rep.implied_CP));
}

TEST(PoincareRatio, HolderMonotoneInExponent) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 40; ++trial) {
    auto s = random_graph(rng, 25, 6);
    auto u = random_field(rng, s.size());
    auto g = local_slope(s, u);
    VertexId x = rng() % s.size();
    double r = std::uniform_real_distribution<double>(2.0 * s.mesh(), 6.0)(rng);
    double prev = std::numeric_limits<double>::infinity();
    for (double p : {1.0, 1.5, 2.0, 3.0, 6.0}) {
      auto rep = poincare_ratio(s, u, g, x, r, p);
      EXPECT_LE(rep.implied_CP, prev * (1 + 1e-12)) << trial << " p=" << p;
      prev = rep.implied_CP;
    }
  }
}

TEST(PoincareRatio, RejectsBadInput) {
  auto s = zoo("interval?h=0.1");
  auto u = distance_field(s, 0);
  EXPECT_THROW(poincare_ratio(s, u, constant_gradient(s.size(), 1.0), 0, 0.5, 0.5), ParameterError);
  ScalarField short_u{{1.0}, "short"};
  EXPECT_THROW(poincare_ratio(s, short_u, constant_gradient(s.size(), 1.0), 0, 0.5, 1.0), ParameterError);
}

TEST(Witness, IntervalValuesFollowFormula) {
  auto s = zoo("interval?h=0.001");
  VertexId x = named_point(s, "third");
  const double r = 0.1;
  auto d = s.distances_from(x);
  // side of each vertex relative to x along the segment
  VertexId left = named_point(s, "left");
  auto side = [&](VertexId v) { return s.distance(left, v) < s.distance(left, x) ? 0 : 1; };
  std::array<double, 2> mu{0.0, 0.0};
  for (VertexId v = 0; v < s.size(); ++v)
    if (v != x && d[v] < r - 0.5 * s.mesh()) mu[side(v)] += s.vertex(v).weight;
  for (double N : {100.0, 1000.0}) {
    auto w = split_witness(s, x, r, N);
    double total_mu = w.component_measure[0] + w.component_measure[1];
    EXPECT_NEAR(total_mu, mu[0] + mu[1], 1e-12);
    // signs differ across x
    VertexId a = 0, b = s.size() - 1;
    EXPECT_LT(w.u.values[a] * w.u.values[b], 0.0);
    for (VertexId v = 0; v < s.size(); ++v) {
      if (v == x || !(d[v] < r - 0.5 * s.mesh())) continue;
      double m = mu[side(v)];
      double collar = 1.0 / (N * m);
      double want = d[v] >= collar ? 1.0 / m : N * d[v];
      EXPECT_NEAR(std::abs(w.u.values[v]), want, 1e-9 * std::max(1.0, want)) << "N=" << N << " v=" << v;
    }
    EXPECT_EQ(w.u.values[x], 0.0);
    // g is N on the collar and vanishes on the plateau away from its edge
    for (VertexId v = 0; v < s.size(); ++v) {
      if (v == x || !(d[v] < r - 0.5 * s.mesh())) continue;
      double collar = 1.0 / (N * mu[side(v)]);
      if (d[v] + s.mesh() < collar) {
        EXPECT_NEAR(w.g.values[v], N, 1e-6 * N);
      }
      if (d[v] > collar + s.mesh()) {
        EXPECT_NEAR(w.g.values[v], 0.0, 1e-9);
      }
    }
  }
}

TEST(Witness, InfiniteNLowerBound) {
  auto s = zoo("interval?h=0.001");
  VertexId x = named_point(s, "third");
  const double r = 0.1;
  auto w = split_witness(s, x, r, std::numeric_limits<double>::infinity());
  auto rep = poincare_ratio(s, w.u, w.g, x, r, 2.0);
  double ball = rep.ball_measure;
  // mean deviation of a +-1/mu(O_i) step is at least 2 / mu(B) up to the centre's weight
  EXPECT_GE(rep.lhs, (2.0 - 0.05) / ball);
}

TEST(Witness, OneSidedPointRejected) {
  auto s = zoo("interval?h=0.01");
  EXPECT_THROW(split_witness(s, named_point(s, "left"), 0.1, 10.0), DomainError);
}

TEST(EstimateCP, IntervalFiniteAndStable) {
  std::vector<double> values;
  for (const char* spec : {"interval?h=0.01", "interval?h=0.005"}) {
    auto s = zoo(spec);
    auto est = estimate_CP(s, 1.0, 0.4, {TestFamily::distance, TestFamily::u_N});
    EXPECT_FALSE(est.infinite);
    EXPECT_GE(est.value, 0.5 * 0.95);
    values.push_back(est.value);
  }
  EXPECT_NEAR(values[1] / values[0], 1.0, 0.1);
}

TEST(EstimateCP, MonotoneInFamilies) {
  auto s = zoo("star?d=3&h=0.02");
  double small = estimate_CP(s, 2.0, 0.5, {TestFamily::distance}).value;
  double big = estimate_CP(s, 2.0, 0.5, {TestFamily::distance, TestFamily::u_N}).value;
  EXPECT_LE(small, big);
  EXPECT_EQ(test_family_from_string("u_N"), TestFamily::u_N);
  EXPECT_THROW(test_family_from_string("nope"), ParameterError);
  EXPECT_THROW(estimate_CP(s, 2.0, 0.5, {}), ParameterError);
}

TEST(Decay, IntervalAndGrid) {
  auto iv = zoo("interval?h=0.001");
  EXPECT_NEAR(volume_decay_exponent(iv, named_point(iv, "middle")).exponent, 1.0, 0.1);
  auto grid = zoo("grid_Rn?n=2&h=0.01");
  EXPECT_NEAR(volume_decay_exponent(grid, named_point(grid, "center")).exponent, 2.0, 0.1);
}

TEST(Decay, CuspOriginMatchesExponent) {
  for (double alpha : {1.0, 3.0}) {
    auto s = zoo("cusp?alpha=" + std::to_string(alpha));
    double want = alpha * (2 - 1) + 1;
    double got = volume_decay_exponent(s, named_point(s, "origin")).exponent;
    EXPECT_NEAR(got, want, 0.1 * want) << alpha;
  }
}

TEST(Decay, NeedsThreeRadii) {
  auto s = zoo("interval?h=0.01");
  EXPECT_THROW(volume_decay_exponent(s, 0, {0.05, 0.1}), ParameterError);
}
