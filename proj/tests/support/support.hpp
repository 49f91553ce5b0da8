#pragma once

// Builders, random generators and independent oracles shared by the unit
// tests and the acceptance binary. Nothing here calls the library's own
// algorithms beyond constructing spaces.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "mmspace/space.hpp"

namespace mms::testing {

using EdgeList = std::vector<std::tuple<std::size_t, std::size_t, double>>;

// Vertices "0".."n-1"; weights default to half the incident edge length (H^1).
inline DiscreteSpace make_graph(std::size_t n, const EdgeList& edges, std::vector<double> weights = {},
                                std::optional<double> tau = std::nullopt) {
  if (weights.empty()) {
    weights.assign(n, 0.0);
    for (const auto& [u, v, len] : edges) {
      weights[u] += 0.5 * len;
      weights[v] += 0.5 * len;
    }
    if (n == 1) weights[0] = 1.0;
  }
  std::vector<Vertex> vs;
  for (std::size_t i = 0; i < n; ++i) vs.push_back({std::to_string(i), weights[i], ""});
  std::vector<Edge> es;
  double mesh = 0.0;
  for (const auto& [u, v, len] : edges) {
    es.push_back({u, v, len});
    mesh = std::max(mesh, len);
  }
  if (mesh == 0.0) mesh = 1.0;
  return DiscreteSpace(std::move(vs), std::move(es), mesh, tau);
}

inline DiscreteSpace make_path(std::size_t n, double len = 1.0) {
  EdgeList e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1, len);
  return make_graph(n, e);
}

inline DiscreteSpace make_cycle(std::size_t n, double len = 1.0) {
  EdgeList e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n, len);
  return make_graph(n, e);
}

// Random connected graph: random spanning tree plus extra chords, lengths in
// [0.5, 2], weights in [0.1, 1].
inline DiscreteSpace random_graph(std::mt19937_64& rng, std::size_t n, std::size_t extra) {
  std::uniform_real_distribution<double> len(0.5, 2.0), w(0.1, 1.0);
  EdgeList e;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    e.emplace_back(parent(rng), i, len(rng));
  }
  if (n > 1) {
    std::uniform_int_distribution<std::size_t> any(0, n - 1);
    for (std::size_t k = 0; k < extra; ++k) {
      std::size_t a = any(rng), b = any(rng);
      if (a != b) e.emplace_back(a, b, len(rng));
    }
  }
  std::vector<double> weights(n);
  for (auto& x : weights) x = w(rng);
  return make_graph(n, e, weights);
}

using Matrix = std::vector<std::vector<double>>;

inline Matrix floyd_warshall(const DiscreteSpace& s) {
  const double inf = std::numeric_limits<double>::infinity();
  std::size_t n = s.size();
  Matrix d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const auto& e : s.edges()) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.length);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.length);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// Union-find component labels of the subgraph induced on `keep`.
inline std::vector<std::vector<VertexId>> oracle_components(const DiscreteSpace& s, const std::vector<bool>& keep) {
  std::vector<std::size_t> parent(s.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = root(parent[x]);
  };
  for (const auto& e : s.edges())
    if (keep[e.u] && keep[e.v]) parent[root(e.u)] = root(e.v);
  std::vector<std::vector<VertexId>> groups(s.size());
  for (VertexId v = 0; v < s.size(); ++v)
    if (keep[v]) groups[root(v)].push_back(v);
  std::vector<std::vector<VertexId>> out;
  for (auto& g : groups)
    if (!g.empty()) out.push_back(std::move(g));
  std::sort(out.begin(), out.end());
  return out;
}

// Gromov-Hausdorff distance by explicit embedding: for a trial eps and maps
// f: X -> Y, g: Y -> X, glue X and Y with bridges of length eps along f and
// g, take the shortest-path closure and accept when it leaves both metrics
// untouched (then each point lies within eps of the other side). Bisects eps.
// Exponential in |X| + |Y|; meant for spaces of at most 4 points.
inline bool glued_metric_feasible(const Matrix& dx, const Matrix& dy, const std::vector<std::size_t>& f,
                                  const std::vector<std::size_t>& g, double eps) {
  const double inf = std::numeric_limits<double>::infinity();
  std::size_t nx = dx.size(), ny = dy.size(), n = nx + ny;
  Matrix d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nx; ++j) d[i][j] = dx[i][j];
  for (std::size_t i = 0; i < ny; ++i)
    for (std::size_t j = 0; j < ny; ++j) d[nx + i][nx + j] = dy[i][j];
  for (std::size_t i = 0; i < nx; ++i) {
    d[i][nx + f[i]] = std::min(d[i][nx + f[i]], eps);
    d[nx + f[i]][i] = d[i][nx + f[i]];
  }
  for (std::size_t j = 0; j < ny; ++j) {
    d[g[j]][nx + j] = std::min(d[g[j]][nx + j], eps);
    d[nx + j][g[j]] = d[g[j]][nx + j];
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  const double tol = 1e-12;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nx; ++j)
      if (d[i][j] < dx[i][j] - tol) return false;
  for (std::size_t i = 0; i < ny; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      if (d[nx + i][nx + j] < dy[i][j] - tol) return false;
  return true;
}

inline double gh_embedding_oracle(const Matrix& dx, const Matrix& dy) {
  std::size_t nx = dx.size(), ny = dy.size();
  double hi = 0.0;
  for (const auto& row : dx)
    for (double v : row) hi = std::max(hi, v);
  for (const auto& row : dy)
    for (double v : row) hi = std::max(hi, v);
  hi = std::max(hi, 1e-9);
  auto feasible = [&](double eps) {
    std::vector<std::size_t> f(nx, 0), g(ny, 0);
    // odometer over all (f, g)
    while (true) {
      if (glued_metric_feasible(dx, dy, f, g, eps)) return true;
      std::size_t i = 0;
      for (; i < nx + ny; ++i) {
        if (i < nx) {
          if (++f[i] < ny) break;
          f[i] = 0;
        } else {
          if (++g[i - nx] < nx) break;
          g[i - nx] = 0;
        }
      }
      if (i == nx + ny) return false;
    }
  };
  double lo = 0.0;
  if (feasible(0.0)) return 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

inline Matrix matrix_of(const DiscreteSpace& s) { return floyd_warshall(s); }

}  // namespace mms::testing
