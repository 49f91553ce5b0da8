#include "mmspace/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <random>
#include <set>

#include "mmspace/errors.hpp"

namespace mms {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void require_field(const DiscreteSpace& space, const std::vector<double>& values, const char* what) {
  if (values.size() != space.size()) {
    throw ParameterError(std::string(what) + " has " + std::to_string(values.size()) + " values for " +
                         std::to_string(space.size()) + " vertices");
  }
}

// Backtracks one shortest path from `source` to `target` along tight edges.
std::vector<VertexId> shortest_path(const DiscreteSpace& space, VertexId source, VertexId target) {
  const auto& row = space.distances_from(source);
  std::vector<VertexId> path{target};
  VertexId v = target;
  while (v != source) {
    VertexId best = v;
    double slack = kInfinity;
    for (const Arc& a : space.neighbors(v)) {
      double s = row[a.to] + a.length - row[v];
      if (row[a.to] < row[v] && s < slack) {
        slack = s;
        best = a.to;
      }
    }
    if (best == v) break;
    v = best;
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

double edge_length(const DiscreteSpace& space, VertexId a, VertexId b) {
  double best = kInfinity;
  for (const Arc& arc : space.neighbors(a))
    if (arc.to == b) best = std::min(best, arc.length);
  return best;
}

// Everything about (x, r) the witnesses share across values of N.
struct SplitGeometry {
  VertexId x = 0;
  double r = 0.0;
  const std::vector<double>* row = nullptr;
  std::vector<int> side;  // 0: O_1, 1: O_2, -1: neither, for ball vertices
  std::vector<VertexId> owner;
  std::array<double, 2> measure{};
};

SplitGeometry split_geometry(const DiscreteSpace& space, VertexId x, double r) {
  if (x >= space.size()) throw ParameterError("center out of range");
  if (!(r > 0.0)) throw ParameterError("radius must be positive");
  SplitGeometry geo;
  geo.x = x;
  geo.r = r;
  geo.row = &space.distances_from(x);
  Region ball = open_ball(space, x, r);
  auto parts = components(space, ball, {x});
  const double stub = std::min(2.0 * space.mesh(), 0.5 * r);
  std::vector<const Region*> kept;
  for (const auto& part : parts) {
    double reach = 0.0;
    for (VertexId v : part.members) reach = std::max(reach, (*geo.row)[v]);
    if (reach >= stub && part.measure > 0.0) kept.push_back(&part);
  }
  if (kept.size() < 2) {
    throw DomainError("vertex " + space.vertex(x).id + " does not split its ball of radius " + std::to_string(r) +
                      " (not a cut point)");
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Region* a, const Region* b) { return a->measure > b->measure; });
  geo.side.assign(space.size(), -1);
  for (int i = 0; i < 2; ++i) {
    for (VertexId v : kept[i]->members) geo.side[v] = i;
    geo.measure[i] = kept[i]->measure;
  }
  geo.owner = nearest_source(space, ball.members);
  return geo;
}

Witness witness_from(const DiscreteSpace& space, const SplitGeometry& geo, double N) {
  if (!(N > 0.0)) throw ParameterError("N must be positive");
  Witness w;
  w.N = N;
  w.component_measure = geo.measure;
  std::vector<double> inside(space.size(), 0.0);
  const auto& row = *geo.row;
  for (int i = 0; i < 2; ++i) w.collar_radius[i] = std::isinf(N) ? 0.0 : 1.0 / (N * geo.measure[i]);
  for (VertexId v = 0; v < space.size(); ++v) {
    int s = geo.side[v];
    if (s < 0) continue;
    double sign = s == 0 ? 1.0 : -1.0;
    inside[v] = row[v] >= w.collar_radius[s] ? sign / geo.measure[s] : sign * N * row[v];
  }
  w.u.name = "u_N";
  w.u.values.resize(space.size());
  for (VertexId v = 0; v < space.size(); ++v) {
    VertexId o = geo.owner[v];
    w.u.values[v] = o < space.size() ? inside[o] : 0.0;
  }
  w.g = local_slope(space, w.u);
  return w;
}

std::vector<double> default_N_grid(const DiscreteSpace& space, const SplitGeometry& geo) {
  const double mu_min = std::min(geo.measure[0], geo.measure[1]);
  std::vector<double> grid;
  for (double rho = geo.r; rho >= 0.5 * space.mesh(); rho /= std::sqrt(2.0)) grid.push_back(1.0 / (rho * mu_min));
  grid.push_back(kInfinity);
  return grid;
}

}  // namespace

GradientField local_slope(const DiscreteSpace& space, const ScalarField& u) {
  require_field(space, u.values, "scalar field");
  GradientField g;
  g.kind = GradientKind::local_slope;
  g.values.assign(space.size(), 0.0);
  for (VertexId v = 0; v < space.size(); ++v) {
    double best = 0.0;
    for (const Arc& a : space.neighbors(v)) best = std::max(best, std::abs(u.values[v] - u.values[a.to]) / a.length);
    g.values[v] = best;
  }
  return g;
}

std::vector<PathViolation> verify_upper_gradient(const DiscreteSpace& space, const ScalarField& u,
                                                 const GradientField& g, const PathSample& sample) {
  require_field(space, u.values, "scalar field");
  require_field(space, g.values, "gradient field");
  double gmax = 0.0;
  for (double x : g.values) {
    if (!(x >= 0.0)) throw ParameterError("gradient field must be nonnegative");
    gmax = std::max(gmax, x);
  }
  const double slack = 2.0 * space.mesh() * gmax;
  std::vector<PathViolation> out;
  auto check = [&](std::vector<VertexId> path) {
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      integral += 0.5 * (g.values[path[i]] + g.values[path[i + 1]]) * edge_length(space, path[i], path[i + 1]);
    double osc = std::abs(u.values[path.back()] - u.values[path.front()]);
    if (osc > integral + slack) out.push_back(PathViolation{std::move(path), osc, integral, slack});
  };
  std::mt19937_64 rng(mix(sample.seed, 0x9a7));
  std::uniform_int_distribution<VertexId> pick(0, space.size() - 1);
  for (std::size_t i = 0; i < sample.shortest_paths; ++i) {
    VertexId a = pick(rng), b = pick(rng);
    check(shortest_path(space, a, b));
  }
  for (std::size_t i = 0; i < sample.random_walks; ++i) {
    std::vector<VertexId> walk{pick(rng)};
    for (std::size_t s = 0; s < sample.walk_steps; ++s) {
      auto nb = space.neighbors(walk.back());
      if (nb.empty()) break;
      std::uniform_int_distribution<std::size_t> step(0, nb.size() - 1);
      walk.push_back(nb[step(rng)].to);
    }
    check(std::move(walk));
  }
  return out;
}

PoincareReport poincare_ratio(const DiscreteSpace& space, const ScalarField& u, const GradientField& g, VertexId x,
                              double r, double p) {
  require_field(space, u.values, "scalar field");
  require_field(space, g.values, "gradient field");
  if (!(p >= 1.0)) throw ParameterError("Poincare exponent p must be >= 1");
  Region ball = open_ball(space, x, r);
  if (ball.weight_sum <= 0.0) throw ParameterError("ball has zero measure");
  PoincareReport rep;
  rep.center = x;
  rep.r = r;
  rep.p = p;
  rep.ball_measure = ball.measure;
  rep.ball_size = ball.size();
  rep.family = u.name;
  const double W = ball.weight_sum;
  double mean_u = 0.0;
  for (VertexId v : ball.members) mean_u += space.vertex(v).weight * u.values[v];
  mean_u /= W;
  double dev = 0.0, gp = 0.0;
  for (VertexId v : ball.members) {
    double w = space.vertex(v).weight;
    dev += w * std::abs(u.values[v] - mean_u);
    gp += w * std::pow(g.values[v], p);
  }
  rep.lhs = dev / W;
  rep.rhs_unit = r * std::pow(gp / W, 1.0 / p);
  if (rep.lhs == 0.0) {
    rep.implied_CP = 0.0;
  } else if (rep.rhs_unit == 0.0) {
    rep.implied_CP = kInfinity;
    rep.infinite = true;
  } else {
    rep.implied_CP = rep.lhs / rep.rhs_unit;
  }
  return rep;
}

std::string to_string(TestFamily family) { return family == TestFamily::distance ? "distance" : "u_N"; }

TestFamily test_family_from_string(const std::string& name) {
  if (name == "distance") return TestFamily::distance;
  if (name == "u_N") return TestFamily::u_N;
  throw ParameterError("unknown test family '" + name + "' (known: distance, u_N)");
}

CPEstimate estimate_CP(const DiscreteSpace& space, double p, double R, const std::vector<TestFamily>& families,
                       const PoincareSample& sample) {
  if (families.empty()) throw ParameterError("estimate_CP needs at least one test family");
  if (!(R > 0.0)) throw ParameterError("R must be positive");
  const double h = space.mesh();
  std::vector<VertexId> centers;
  std::set<VertexId> seen;
  for (VertexId c : sample.centers) {
    if (c >= space.size()) throw ParameterError("sample center out of range");
    if (seen.insert(c).second) centers.push_back(c);
  }
  std::mt19937_64 rng(mix(sample.seed, 0xc9));
  std::uniform_int_distribution<VertexId> pick(0, space.size() - 1);
  std::size_t want = std::min(sample.center_count, space.size() - centers.size());
  for (std::size_t added = 0, tries = 0; added < want && tries < 50 * (want + 1); ++tries) {
    VertexId c = pick(rng);
    if (seen.insert(c).second) {
      centers.push_back(c);
      ++added;
    }
  }
  std::vector<double> radii = sample.radii;
  if (radii.empty()) {
    for (double r = R; r >= 4.0 * h && radii.size() < 4; r /= 2.0) radii.push_back(r);
    if (radii.empty()) radii.push_back(R);
  }
  for (double r : radii)
    if (!(r > 0.0) || r > R * (1.0 + 1e-12)) throw ParameterError("sample radii must lie in (0, R]");

  CPEstimate est;
  auto consider = [&](PoincareReport rep) {
    ++est.configurations;
    bool better = rep.infinite ? !est.infinite : (!est.infinite && rep.implied_CP > est.value);
    if (better || !est.witness) {
      if (rep.infinite) est.infinite = true;
      est.value = std::max(est.value, rep.implied_CP);
      est.witness = std::move(rep);
    }
  };

  auto has = [&](TestFamily f) { return std::find(families.begin(), families.end(), f) != families.end(); };
  if (has(TestFamily::distance)) {
    std::vector<VertexId> sources = centers;
    std::mt19937_64 src_rng(mix(sample.seed, 0xd15));
    for (std::size_t i = 0; i < sample.distance_sources; ++i) sources.push_back(pick(src_rng));
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
    for (VertexId z : sources) {
      ScalarField u{space.distances_from(z), "distance"};
      GradientField g = local_slope(space, u);
      for (VertexId x : centers)
        for (double r : radii) {
          if (open_ball(space, x, r).weight_sum <= 0.0) continue;
          consider(poincare_ratio(space, u, g, x, r, p));
        }
    }
  }
  if (has(TestFamily::u_N)) {
    for (VertexId x : centers) {
      for (double r : radii) {
        SplitGeometry geo;
        try {
          geo = split_geometry(space, x, r);
        } catch (const DomainError&) {
          continue;
        }
        auto grid = sample.N_grid.empty() ? default_N_grid(space, geo) : sample.N_grid;
        for (double N : grid) {
          Witness w = witness_from(space, geo, N);
          consider(poincare_ratio(space, w.u, w.g, x, r, p));
        }
      }
    }
  }
  return est;
}

Witness split_witness(const DiscreteSpace& space, VertexId x, double r, double N) {
  return witness_from(space, split_geometry(space, x, r), N);
}

DecayFit volume_decay_exponent(const DiscreteSpace& space, VertexId x, std::vector<double> radius_grid) {
  const double h = space.mesh();
  const auto& row = space.distances_from(x);
  if (radius_grid.empty()) {
    double lo = 4.0 * h, hi = 0.5 * space.eccentricity(x);
    if (hi > lo) {
      for (int i = 0; i < 10; ++i) radius_grid.push_back(lo * std::pow(hi / lo, i / 9.0));
    }
  }
  DecayFit fit;
  for (double r : radius_grid) {
    if (r < 4.0 * h * (1.0 - 1e-12)) continue;
    double m = 0.0;
    for (VertexId v = 0; v < space.size(); ++v)
      if (row[v] < r) m += space.weight(v);
    if (m <= 0.0) continue;
    fit.radii.push_back(r);
    fit.measures.push_back(m);
  }
  if (fit.radii.size() < 3) throw ParameterError("volume decay fit needs at least 3 radii >= 4h with positive measure");
  const std::size_t n = fit.radii.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double lx = std::log(fit.radii[i]), ly = std::log(fit.measures[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double denom = n * sxx - sx * sx;
  if (denom <= 0.0) throw ParameterError("volume decay fit needs distinct radii");
  fit.exponent = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.exponent * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double e = std::log(fit.measures[i]) - (fit.intercept + fit.exponent * std::log(fit.radii[i]));
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace mms
