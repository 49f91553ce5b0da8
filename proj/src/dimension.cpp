#include "mmspace/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mmspace/comparison.hpp"
#include "mmspace/errors.hpp"

namespace mms {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct LineFit {
  double slope = 0.0, intercept = 0.0, residual = 0.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (xs.size() < 2 || denom <= 0.0) throw ParameterError("degenerate scale grid");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double e = ys[i] - (f.intercept + f.slope * xs[i]);
    ss += e * e;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

// Voronoi cells of a center set, ties to the lower center.
std::vector<VertexSet> voronoi_cells(const DiscreteSpace& space, const VertexSet& centers) {
  auto owner = nearest_source(space, centers);
  std::vector<VertexSet> cells(centers.size());
  for (VertexId v = 0; v < space.size(); ++v) {
    auto it = std::lower_bound(centers.begin(), centers.end(), owner[v]);
    cells[static_cast<std::size_t>(it - centers.begin())].push_back(v);
  }
  return cells;
}

std::vector<std::vector<double>> small_matrix(const DiscreteSpace& s) { return distance_matrix(s); }

double diameter_of(const std::vector<std::vector<double>>& d) {
  double m = 0.0;
  for (const auto& row : d)
    for (double x : row) m = std::max(m, x);
  return m;
}

// Feasibility of a correspondence with distortion <= t, by backtracking over
// images of X followed by preimages of uncovered Y points.
class CorrespondenceSearch {
 public:
  CorrespondenceSearch(const std::vector<std::vector<double>>& dx, const std::vector<std::vector<double>>& dy)
      : dx_(dx), dy_(dy), nx_(dx.size()), ny_(dy.size()) {}

  bool feasible(double t, std::vector<std::pair<VertexId, VertexId>>* out) {
    t_ = t;
    chosen_.clear();
    image_count_.assign(ny_, 0);
    bool ok = assign_x(0);
    if (ok && out) *out = chosen_;
    return ok;
  }

 private:
  bool compatible(VertexId x, VertexId y) const {
    for (const auto& [a, b] : chosen_)
      if (std::abs(dx_[x][a] - dy_[y][b]) > t_) return false;
    return true;
  }

  bool assign_x(std::size_t x) {
    if (x == nx_) return assign_y(0);
    for (VertexId y = 0; y < ny_; ++y) {
      if (!compatible(x, y)) continue;
      chosen_.emplace_back(x, y);
      ++image_count_[y];
      if (assign_x(x + 1)) return true;
      --image_count_[y];
      chosen_.pop_back();
    }
    return false;
  }

  bool assign_y(std::size_t y) {
    if (y == ny_) return true;
    if (image_count_[y] > 0) return assign_y(y + 1);
    for (VertexId x = 0; x < nx_; ++x) {
      if (!compatible(x, y)) continue;
      chosen_.emplace_back(x, y);
      if (assign_y(y + 1)) return true;
      chosen_.pop_back();
    }
    return false;
  }

  const std::vector<std::vector<double>>& dx_;
  const std::vector<std::vector<double>>& dy_;
  std::size_t nx_, ny_;
  double t_ = 0.0;
  std::vector<std::pair<VertexId, VertexId>> chosen_;
  std::vector<int> image_count_;
};

}  // namespace

VertexSet maximal_separated_set(const DiscreteSpace& space, double eps, std::uint64_t seed) {
  if (!(eps > 0.0)) throw ParameterError("separation must be positive");
  std::vector<VertexId> order(space.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(mix(seed, 0x5e9));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<char> blocked(space.size(), 0);
  VertexSet chosen;
  for (VertexId v : order) {
    if (blocked[v]) continue;
    chosen.push_back(v);
    for (const auto& [w, d] : space.neighborhood(v, eps))
      if (d < eps) blocked[w] = 1;
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

VertexSet greedy_cover(const DiscreteSpace& space, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw ParameterError("cover radius must be nonnegative");
  // a vertex counts as covered when its whole mesh cell lies in the ball
  const double reach = std::max(0.0, delta - 0.5 * space.mesh());
  std::vector<VertexId> order(space.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(mix(seed, 0xc0e));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<char> covered(space.size(), 0);
  VertexSet centers;
  for (VertexId v : order) {
    if (covered[v]) continue;
    centers.push_back(v);
    for (const auto& [w, d] : space.neighborhood(v, reach)) covered[w] = 1;
  }
  std::sort(centers.begin(), centers.end());
  return centers;
}

std::size_t covering_number(const DiscreteSpace& space, double delta, std::uint64_t seed) {
  return greedy_cover(space, delta, seed).size();
}

double hausdorff_measure_estimate(const DiscreteSpace& space, double s, double delta, std::uint64_t seed) {
  if (!(s >= 0.0)) throw ParameterError("Hausdorff dimension parameter s must be nonnegative");
  if (!(delta > 0.0)) throw ParameterError("scale must be positive");
  auto cells = voronoi_cells(space, greedy_cover(space, 0.5 * delta, seed));
  const double omega = unit_ball_volume(s);
  const double reach = delta + 2.0 * space.mesh();
  double total = 0.0;
  for (const auto& cell : cells) {
    double diam = 0.0;
    for (VertexId v : cell) {
      for (const auto& [w, d] : space.neighborhood(v, reach))
        if (d > diam && std::binary_search(cell.begin(), cell.end(), w)) diam = d;
    }
    // a single point is covered by sets of arbitrarily small diameter
    total += omega * (s == 0.0 ? 1.0 : std::pow(0.5 * diam, s));
  }
  return total;
}

HausdorffProfile hausdorff_measure_profile(const DiscreteSpace& space, double s, std::vector<double> deltas,
                                           std::uint64_t seed) {
  std::sort(deltas.begin(), deltas.end());
  HausdorffProfile p;
  p.deltas = deltas;
  double best = kInfinity;
  for (double d : deltas) {
    double v = hausdorff_measure_estimate(space, s, d, seed);
    p.raw.push_back(v);
    best = std::min(best, v);
    p.envelope.push_back(best);
  }
  return p;
}

CoveringProfile dimension_estimate(const DiscreteSpace& space, std::vector<double> scale_grid, std::uint64_t seed) {
  const double h = space.mesh();
  if (scale_grid.empty()) {
    double lo = 2.5 * h, hi = std::min(30.5 * h, 0.25 * space.eccentricity(0));
    if (!(hi > lo)) throw ParameterError("degenerate scale grid: space too small for its mesh");
    // half-integer multiples of h, where cell-covered balls have exact length
    for (int i = 0; i < 8; ++i) {
      double d = lo * std::pow(hi / lo, i / 7.0);
      scale_grid.push_back((std::round(d / h - 0.5) + 0.5) * h);
    }
  }
  std::sort(scale_grid.begin(), scale_grid.end());
  scale_grid.erase(std::unique(scale_grid.begin(), scale_grid.end()), scale_grid.end());
  if (scale_grid.size() < 3 || !(scale_grid.front() > 0.0)) throw ParameterError("degenerate scale grid");
  CoveringProfile prof;
  std::vector<double> xs, ys;
  for (double d : scale_grid) {
    std::size_t n = covering_number(space, d, seed);
    prof.deltas.push_back(d);
    prof.covering.push_back(n);
    prof.separated.push_back(maximal_separated_set(space, 2.0 * d, seed).size());
    xs.push_back(-std::log(d));
    ys.push_back(std::log(static_cast<double>(n)));
  }
  LineFit f = fit_line(xs, ys);
  prof.slope = f.slope;
  prof.intercept = f.intercept;
  prof.residual = f.residual;
  return prof;
}

double hausdorff_distance(const DiscreteSpace& space, const Region& a, const Region& b) {
  if (a.empty() || b.empty()) throw ParameterError("Hausdorff distance needs nonempty sets");
  auto directed = [&](const Region& from, const Region& to) {
    std::vector<double> zeros(from.size(), 0.0);
    auto d = space.offset_distances(from.members, zeros);
    double worst = 0.0;
    for (VertexId v : to.members) worst = std::max(worst, d[v]);
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

double distortion(const std::vector<std::vector<double>>& dx, const std::vector<std::vector<double>>& dy,
                  const std::vector<std::pair<VertexId, VertexId>>& relation) {
  double worst = 0.0;
  for (const auto& [a, c] : relation)
    for (const auto& [b, d] : relation) worst = std::max(worst, std::abs(dx[a][b] - dy[c][d]));
  return worst;
}

GHBounds gh_distance_small(const DiscreteSpace& X, const DiscreteSpace& Y, const GHOptions& options) {
  const std::size_t nx = X.size(), ny = Y.size();
  const bool exact = nx * ny <= options.budget;
  if (!exact && !options.allow_heuristic) {
    throw BudgetError("exact Gromov-Hausdorff search needs |X||Y| = " + std::to_string(nx * ny) +
                      " > budget " + std::to_string(options.budget) + "; allow heuristic bounds to proceed");
  }
  auto dx = small_matrix(X), dy = small_matrix(Y);
  GHBounds out;
  if (exact) {
    std::vector<double> candidates{0.0};
    for (std::size_t a = 0; a < nx; ++a)
      for (std::size_t b = a + 1; b < nx; ++b)
        for (std::size_t c = 0; c < ny; ++c)
          for (std::size_t d = 0; d < ny; ++d) candidates.push_back(std::abs(dx[a][b] - dy[c][d]));
    for (std::size_t c = 0; c < ny; ++c)
      for (std::size_t d = c + 1; d < ny; ++d) candidates.push_back(dy[c][d]);  // pairs sharing an x
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    CorrespondenceSearch search(dx, dy);
    std::size_t lo = 0, hi = candidates.size() - 1;  // the largest candidate is always feasible
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (search.feasible(candidates[mid], nullptr))
        hi = mid;
      else
        lo = mid + 1;
    }
    search.feasible(candidates[lo], &out.correspondence);
    out.lower = out.upper = 0.5 * distortion(dx, dy, out.correspondence);
    out.exact = true;
    return out;
  }
  std::vector<double> ex(nx, 0.0), ey(ny, 0.0);
  for (std::size_t a = 0; a < nx; ++a) ex[a] = *std::max_element(dx[a].begin(), dx[a].end());
  for (std::size_t c = 0; c < ny; ++c) ey[c] = *std::max_element(dy[c].begin(), dy[c].end());
  double ecc_bound = 0.0;
  for (std::size_t a = 0; a < nx; ++a) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < ny; ++c)
      if (std::abs(ex[a] - ey[c]) < std::abs(ex[a] - ey[best])) best = c;
    ecc_bound = std::max(ecc_bound, std::abs(ex[a] - ey[best]));
    out.correspondence.emplace_back(a, best);
  }
  for (std::size_t c = 0; c < ny; ++c) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < nx; ++a)
      if (std::abs(ex[a] - ey[c]) < std::abs(ex[best] - ey[c])) best = a;
    ecc_bound = std::max(ecc_bound, std::abs(ex[best] - ey[c]));
    out.correspondence.emplace_back(best, c);
  }
  const double diam_x = diameter_of(dx), diam_y = diameter_of(dy);
  out.lower = 0.5 * std::max(std::abs(diam_x - diam_y), ecc_bound);
  out.upper = std::min(0.5 * distortion(dx, dy, out.correspondence), 0.5 * std::max(diam_x, diam_y));
  out.upper = std::max(out.upper, out.lower);
  return out;
}

EpsilonVerdict check_epsilon_approximation(const DiscreteSpace& X, const DiscreteSpace& Y,
                                           const std::vector<VertexId>& phi, double eps) {
  if (phi.size() != X.size()) throw ParameterError("map must be defined on every vertex of X");
  for (VertexId y : phi)
    if (y >= Y.size()) throw ParameterError("map sends a vertex outside Y");
  EpsilonVerdict v;
  for (VertexId a = 0; a < X.size(); ++a) {
    const auto& rx = X.distances_from(a);
    const auto& ry = Y.distances_from(phi[a]);
    for (VertexId b = a + 1; b < X.size(); ++b) {
      double e = std::abs(ry[phi[b]] - rx[b]);
      if (e > v.worst_distortion || !v.worst_pair) {
        v.worst_distortion = std::max(v.worst_distortion, e);
        v.worst_pair = std::pair{a, b};
      }
    }
  }
  VertexSet image(phi.begin(), phi.end());
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());
  std::vector<double> zeros(image.size(), 0.0);
  auto near = Y.offset_distances(image, zeros);
  for (VertexId y = 0; y < Y.size(); ++y) {
    if (near[y] > v.worst_coverage || !v.worst_uncovered) {
      v.worst_coverage = std::max(v.worst_coverage, near[y]);
      v.worst_uncovered = y;
    }
  }
  v.distortion_ok = v.worst_distortion < eps;
  v.coverage_ok = v.worst_coverage < eps;
  v.pass = v.distortion_ok && v.coverage_ok;
  return v;
}

}  // namespace mms
