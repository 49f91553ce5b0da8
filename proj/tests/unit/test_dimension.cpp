#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mmspace/dimension.hpp"
#include "mmspace/errors.hpp"
#include "mmspace/zoo.hpp"
#include "support/support.hpp"

using namespace mms;
using namespace mms::testing;

namespace {

DiscreteSpace zoo(const std::string& s) { return generate(parse_zoo_spec(s)); }

// Complete graph realizing a metric given as a matrix (assumed to satisfy the triangle inequality).
DiscreteSpace from_matrix(const Matrix& d) {
  EdgeList e;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) e.emplace_back(i, j, d[i][j]);
  return make_graph(d.size(), e, std::vector<double>(d.size(), 1.0));
}

// Random metric on k points: shortest-path closure of random positive lengths.
Matrix random_metric(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> len(0.2, 3.0);
  Matrix d(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) d[i][j] = d[j][i] = len(rng);
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) d[i][j] = std::min(d[i][j], d[i][m] + d[m][j]);
  return d;
}

}  // namespace

TEST(Separated, IntervalPackingSize) {
  auto s = zoo("interval?h=0.01");
  // any maximal 0.3-separated subset of [0,1] has between ceil(1/0.6) and floor(1/0.3) + 1 points;
  // some visiting orders stop at two (e.g. 0.29 and 0.71)
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto set = maximal_separated_set(s, 0.3, seed);
    EXPECT_GE(set.size(), 2u) << seed;
    EXPECT_LE(set.size(), 4u) << seed;
  }
  auto default_order = maximal_separated_set(s, 0.3);
  EXPECT_GE(default_order.size(), 3u);
  EXPECT_LE(default_order.size(), 5u);
  auto single = make_graph(1, {});
  EXPECT_EQ(maximal_separated_set(single, 0.3), (VertexSet{0}));
}

TEST(Separated, GridSquarePackingSize) {
  auto s = zoo("grid_Rn?n=2&h=0.02");
  auto set = maximal_separated_set(s, 0.5);
  EXPECT_GE(set.size(), 2u);
  EXPECT_LE(set.size(), 8u);
}

TEST(Separated, SeparatedMaximalAndNetOnRandomGraphs) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = random_graph(rng, 40, trial % 5);
    auto d = floyd_warshall(s);
    double eps = std::uniform_real_distribution<double>(0.5, 4.0)(rng);
    auto set = maximal_separated_set(s, eps, trial + 1);
    for (std::size_t i = 0; i < set.size(); ++i)
      for (std::size_t j = i + 1; j < set.size(); ++j) EXPECT_GE(d[set[i]][set[j]], eps);
    for (VertexId v = 0; v < s.size(); ++v) {
      double nearest = 1e300;
      for (VertexId c : set) nearest = std::min(nearest, d[v][c]);
      // every vertex is within eps, so nothing else could be added
      EXPECT_LT(nearest, eps) << trial;
    }
  }
}

TEST(Covering, Examples) {
  auto iv = zoo("interval?h=0.01");
  auto n = covering_number(iv, 0.25);
  EXPECT_GE(n, 2u);
  EXPECT_LE(n, 4u);
  EXPECT_EQ(covering_number(make_graph(1, {}), 0.25), 1u);
  auto sq = zoo("grid_Rn?n=2&h=0.02");
  auto m = covering_number(sq, 0.25);
  EXPECT_GE(m, 4u);
  EXPECT_LE(m, 16u);
}

TEST(Covering, CoverIsACoverOnRandomGraphs) {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = random_graph(rng, 40, trial % 5);
    auto d = floyd_warshall(s);
    double delta = std::uniform_real_distribution<double>(s.mesh(), 5.0)(rng);
    auto centers = greedy_cover(s, delta, trial + 1);
    for (VertexId v = 0; v < s.size(); ++v) {
      bool covered = false;
      for (VertexId c : centers) covered = covered || d[v][c] <= delta - 0.5 * s.mesh() || v == c;
      EXPECT_TRUE(covered) << trial << " v=" << v;
    }
  }
}

TEST(Covering, SeparatedAtTwiceScaleBoundedByCover) {
  for (const char* spec : {"interval?h=0.005", "grid_Rn?n=2&h=0.02", "star?d=3&h=0.01"}) {
    auto p = dimension_estimate(zoo(spec));
    for (std::size_t i = 0; i < p.deltas.size(); ++i) EXPECT_LE(p.separated[i], p.covering[i]) << spec;
    for (std::size_t i = 1; i < p.deltas.size(); ++i) EXPECT_LE(p.covering[i], p.covering[i - 1]) << spec;
  }
}

TEST(Hausdorff, IntervalOneDimensionalMeasure) {
  auto s = zoo("interval?h=0.005");
  EXPECT_NEAR(hausdorff_measure_estimate(s, 1.0, 0.1), 1.0, 0.2);
}

TEST(Hausdorff, ZeroDimensionalCountsCells) {
  auto s = zoo("interval?h=0.01");
  double big = 0.6;
  double h0 = hausdorff_measure_estimate(s, 0.0, big);
  EXPECT_EQ(h0, std::round(h0));
  EXPECT_GE(h0, 1.0);
  EXPECT_THROW(hausdorff_measure_estimate(s, -0.5, 0.1), ParameterError);
}

TEST(Hausdorff, ExcessDimensionVanishes) {
  auto s = zoo("grid_Rn?n=2&h=0.025");
  auto prof = hausdorff_measure_profile(s, 3.0, {0.1, 0.2, 0.4});
  for (std::size_t i = 1; i < prof.envelope.size(); ++i) EXPECT_LE(prof.envelope[i], prof.envelope[i - 1]);
  EXPECT_LT(prof.raw.front(), 0.5 * prof.raw.back());
}

TEST(Dimension, ZooSlopes) {
  EXPECT_NEAR(dimension_estimate(zoo("interval?h=0.002")).slope, 1.0, 0.15);
  EXPECT_NEAR(dimension_estimate(zoo("grid_Rn?n=2&h=0.01")).slope, 2.0, 0.15);
  EXPECT_NEAR(dimension_estimate(zoo("star?d=3&h=0.002")).slope, 1.0, 0.15);
}

TEST(Dimension, DegenerateGridRejected) {
  auto s = zoo("interval?h=0.01");
  EXPECT_THROW(dimension_estimate(s, {0.05}), ParameterError);
  EXPECT_THROW(dimension_estimate(s, {0.05, 0.05, 0.05}), ParameterError);
}

TEST(HausdorffDistance, Examples) {
  auto s = zoo("interval?h=0.01");
  Region all = make_region(s, [&] {
    VertexSet v(s.size());
    for (VertexId i = 0; i < s.size(); ++i) v[i] = i;
    return v;
  }());
  VertexId a = named_point(s, "left"), b = named_point(s, "right");
  EXPECT_EQ(hausdorff_distance(s, all, all), 0.0);
  EXPECT_NEAR(hausdorff_distance(s, all, make_region(s, {a, b})), 0.5, 0.5 * s.mesh() + 1e-12);
  EXPECT_DOUBLE_EQ(hausdorff_distance(s, make_region(s, {a}), make_region(s, {b})), s.distance(a, b));
  EXPECT_THROW(hausdorff_distance(s, all, make_region(s, {})), ParameterError);
}

TEST(HausdorffDistance, MetricOnRandomSubsets) {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = random_graph(rng, 20, 6);
    auto pick = [&] {
      VertexSet v;
      for (VertexId i = 0; i < s.size(); ++i)
        if (rng() % 3 == 0) v.push_back(i);
      if (v.empty()) v.push_back(rng() % s.size());
      return make_region(s, v);
    };
    Region A = pick(), B = pick(), C = pick();
    double ab = hausdorff_distance(s, A, B), bc = hausdorff_distance(s, B, C), ac = hausdorff_distance(s, A, C);
    EXPECT_EQ(ab, hausdorff_distance(s, B, A));
    EXPECT_LE(ac, ab + bc + 1e-12);
    EXPECT_GE(ab, 0.0);
  }
}

TEST(GH, IdenticalSpacesAreZero) {
  std::mt19937_64 rng(64);
  auto X = from_matrix(random_metric(rng, 4));
  auto b = gh_distance_small(X, X);
  EXPECT_TRUE(b.exact);
  EXPECT_EQ(b.lower, 0.0);
  EXPECT_EQ(b.upper, 0.0);
}

TEST(GH, TwoPointSpaces) {
  for (auto [a, c] : {std::pair{1.0, 3.0}, std::pair{2.0, 2.5}, std::pair{0.7, 0.1}}) {
    auto X = make_graph(2, {{0, 1, a}}), Y = make_graph(2, {{0, 1, c}});
    auto b = gh_distance_small(X, Y);
    EXPECT_TRUE(b.exact);
    EXPECT_NEAR(b.lower, std::abs(a - c) / 2, 1e-15);
  }
}

TEST(GH, PointVersusCoarseInterval) {
  auto point = make_graph(1, {});
  for (std::size_t n : {2, 3, 5}) {
    auto seg = make_path(n, 1.0 / static_cast<double>(n - 1));
    auto b = gh_distance_small(point, seg);
    EXPECT_NEAR(b.upper, 0.5, 1e-12) << n;
  }
}

TEST(GH, MatchesEmbeddingOracle) {
  std::mt19937_64 rng(65);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t nx = 1 + rng() % 4, ny = 1 + rng() % 4;
    auto dx = random_metric(rng, nx), dy = random_metric(rng, ny);
    auto b = gh_distance_small(from_matrix(dx), from_matrix(dy));
    ASSERT_TRUE(b.exact);
    double oracle = gh_embedding_oracle(dx, dy);
    EXPECT_NEAR(b.lower, oracle, 1e-12) << trial << " " << nx << "x" << ny;
    EXPECT_NEAR(distortion(dx, dy, b.correspondence) / 2, b.upper, 1e-12);
  }
}

TEST(GH, BudgetAndHeuristic) {
  auto X = zoo("interval?h=0.1"), Y = zoo("interval?L=1.2&h=0.1");
  EXPECT_THROW(gh_distance_small(X, Y), BudgetError);
  GHOptions opt;
  opt.allow_heuristic = true;
  auto b = gh_distance_small(X, Y, opt);
  EXPECT_FALSE(b.exact);
  EXPECT_LE(b.lower, b.upper);
  EXPECT_GE(b.upper, 0.1 - 1e-12);
}

TEST(GH, SandwichOnRandomSpaces) {
  std::mt19937_64 rng(66);
  GHOptions opt;
  opt.budget = 0;
  opt.allow_heuristic = true;
  for (int trial = 0; trial < 20; ++trial) {
    auto dx = random_metric(rng, 3), dy = random_metric(rng, 4);
    auto exact = gh_distance_small(from_matrix(dx), from_matrix(dy));
    auto rough = gh_distance_small(from_matrix(dx), from_matrix(dy), opt);
    EXPECT_LE(rough.lower, exact.lower + 1e-12);
    EXPECT_GE(rough.upper, exact.upper - 1e-12);
  }
}

TEST(EpsilonApprox, IdentityAndConstant) {
  auto s = zoo("interval?h=0.05");
  std::vector<VertexId> id(s.size());
  for (VertexId v = 0; v < s.size(); ++v) id[v] = v;
  EXPECT_TRUE(check_epsilon_approximation(s, s, id, 1e-9).pass);
  std::vector<VertexId> constant(s.size(), 0);
  auto bad = check_epsilon_approximation(s, s, constant, 0.1);
  EXPECT_FALSE(bad.pass);
  EXPECT_FALSE(bad.coverage_ok);
  ASSERT_TRUE(bad.worst_uncovered.has_value());
}

TEST(EpsilonApprox, MeshCoarsening) {
  const double h = 0.01;
  auto fine = make_path(101, h), coarse = make_path(51, 2 * h);
  std::vector<VertexId> phi(fine.size());
  for (VertexId v = 0; v < fine.size(); ++v) phi[v] = v / 2;
  auto verdict = check_epsilon_approximation(fine, coarse, phi, 3 * h);
  EXPECT_TRUE(verdict.pass);
  EXPECT_TRUE(verdict.distortion_ok);
  EXPECT_LE(verdict.worst_distortion, h + 1e-12);
}
