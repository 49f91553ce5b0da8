#include "mmspace/space.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_map>

#include "mmspace/errors.hpp"

namespace mms {

namespace detail {
struct DistanceCache {
  std::mutex mutex;
  std::vector<std::shared_ptr<const std::vector<double>>> rows;
  std::unordered_map<std::string, VertexId> ids;
};
}  // namespace detail

namespace {

using QueueItem = std::pair<double, VertexId>;
using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

std::string edge_label(const std::vector<Vertex>& vertices, std::size_t index, const Edge& e) {
  std::ostringstream out;
  out << "edge " << index << " (";
  out << (e.u < vertices.size() ? vertices[e.u].id : std::to_string(e.u)) << "-";
  out << (e.v < vertices.size() ? vertices[e.v].id : std::to_string(e.v)) << ")";
  return out.str();
}

}  // namespace

std::string to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::ball: return "ball";
    case RegionKind::closed_ball: return "closed_ball";
    case RegionKind::annulus: return "annulus";
    case RegionKind::sphere: return "sphere";
    case RegionKind::component: return "component";
    case RegionKind::explicit_set: return "explicit";
  }
  return "explicit";
}

bool Region::contains(VertexId v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

ShadowParams::ShadowParams(double s1, double s2, double r1, double r2, std::optional<double> tolerance)
    : s1_(s1), s2_(s2), r1_(r1), r2_(r2), tolerance_(tolerance) {
  if (!(s1 >= 0.0) || !(s1 < s2) || !(s1 <= r1) || !(r1 < r2) || !(s2 <= r2)) {
    std::ostringstream out;
    out << "shadow radii must satisfy 0 <= s1 < s2, s1 <= r1 < r2, s2 <= r2; got s=(" << s1 << ", " << s2
        << ") r=(" << r1 << ", " << r2 << ")";
    throw ParameterError(out.str());
  }
  if (tolerance && !(*tolerance >= 0.0)) throw ParameterError("shadow tolerance must be >= 0");
}

ShadowParams ShadowParams::scaled(double a) const {
  std::optional<double> tol;
  if (tolerance_) tol = *tolerance_ * a;
  return ShadowParams(s1_ * a, s2_ * a, r1_ * a, r2_ * a, tol);
}

DiscreteSpace::DiscreteSpace(std::vector<Vertex> vertices, std::vector<Edge> edges, double mesh,
                             std::optional<double> tau, nlohmann::json meta, double measure_scale)
    : vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      mesh_(mesh),
      tau_(tau.value_or(2.0 * mesh)),
      meta_(std::move(meta)),
      measure_scale_(measure_scale),
      cache_(std::make_shared<detail::DistanceCache>()) {
  if (vertices_.empty()) throw SpaceError("space has no vertices");
  if (!(mesh_ > 0.0) || !std::isfinite(mesh_)) throw SpaceError("mesh must be positive and finite");
  if (!(tau_ >= 0.0) || !std::isfinite(tau_)) throw SpaceError("tau must be nonnegative and finite");
  if (!(measure_scale_ > 0.0) || !std::isfinite(measure_scale_)) throw SpaceError("measure scale must be positive");

  auto& ids = cache_->ids;
  double total = 0.0;
  for (VertexId i = 0; i < vertices_.size(); ++i) {
    const auto& v = vertices_[i];
    if (!(v.weight >= 0.0) || !std::isfinite(v.weight)) {
      throw SpaceError("vertex '" + v.id + "' has invalid weight");
    }
    if (!ids.emplace(v.id, i).second) throw SpaceError("duplicate vertex id '" + v.id + "'");
    total += v.weight;
  }
  if (!(total > 0.0)) throw SpaceError("total measure must be positive");

  std::vector<std::size_t> degree(vertices_.size(), 0);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.u >= vertices_.size() || e.v >= vertices_.size()) {
      throw SpaceError(edge_label(vertices_, i, e) + " refers to an unknown vertex");
    }
    if (e.u == e.v) throw SpaceError(edge_label(vertices_, i, e) + " is a loop");
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      std::ostringstream out;
      out << edge_label(vertices_, i, e) << " has non-positive length " << e.length;
      throw SpaceError(out.str());
    }
    ++degree[e.u];
    ++degree[e.v];
  }
  arc_start_.assign(vertices_.size() + 1, 0);
  for (std::size_t v = 0; v < vertices_.size(); ++v) arc_start_[v + 1] = arc_start_[v] + degree[v];
  arcs_.resize(arc_start_.back());
  std::vector<std::size_t> fill(arc_start_.begin(), arc_start_.end() - 1);
  for (const auto& e : edges_) {
    arcs_[fill[e.u]++] = Arc{e.v, e.length};
    arcs_[fill[e.v]++] = Arc{e.u, e.length};
  }

  // connectivity
  std::vector<char> seen(vertices_.size(), 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (const auto& a : neighbors(v)) {
      if (!seen[a.to]) {
        seen[a.to] = 1;
        ++reached;
        stack.push_back(a.to);
      }
    }
  }
  if (reached != vertices_.size()) {
    throw SpaceError("not a length space model: graph is disconnected (" + std::to_string(reached) + " of " +
                     std::to_string(vertices_.size()) + " vertices reachable)");
  }
  cache_->rows.resize(vertices_.size());
}

std::span<const Arc> DiscreteSpace::neighbors(VertexId v) const {
  return {arcs_.data() + arc_start_[v], arc_start_[v + 1] - arc_start_[v]};
}

double DiscreteSpace::total_measure() const {
  double total = 0.0;
  for (const auto& v : vertices_) total += v.weight;
  return measure_scale_ * total;
}

std::optional<VertexId> DiscreteSpace::find(const std::string& id) const {
  auto it = cache_->ids.find(id);
  if (it == cache_->ids.end()) return std::nullopt;
  return it->second;
}

VertexId DiscreteSpace::index_of(const std::string& id) const {
  auto v = find(id);
  if (!v) throw ParameterError("unknown vertex id '" + id + "'");
  return *v;
}

const std::vector<double>& DiscreteSpace::distances_from(VertexId source) const {
  if (source >= size()) throw ParameterError("vertex index out of range");
  {
    std::lock_guard lock(cache_->mutex);
    if (cache_->rows[source]) return *cache_->rows[source];
  }
  auto row = std::make_shared<const std::vector<double>>(distances_within(source, kInfinity));
  std::lock_guard lock(cache_->mutex);
  if (!cache_->rows[source]) cache_->rows[source] = std::move(row);
  return *cache_->rows[source];
}

double DiscreteSpace::distance(VertexId a, VertexId b) const { return distances_from(a)[b]; }

std::vector<double> DiscreteSpace::distances_within(VertexId source, double radius) const {
  if (source >= size()) throw ParameterError("vertex index out of range");
  VertexId sources[1] = {source};
  double offsets[1] = {0.0};
  return offset_distances(sources, offsets, radius);
}

std::vector<double> DiscreteSpace::offset_distances(std::span<const VertexId> sources,
                                                    std::span<const double> offsets, double cutoff) const {
  if (sources.size() != offsets.size()) throw ParameterError("sources and offsets differ in length");
  std::vector<double> dist(size(), kInfinity);
  std::vector<char> done(size(), 0);
  MinQueue queue;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (offsets[i] < dist[sources[i]]) {
      dist[sources[i]] = offsets[i];
      queue.emplace(offsets[i], sources[i]);
    }
  }
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (done[v]) continue;
    if (d > cutoff) {
      dist[v] = kInfinity;
      break;
    }
    done[v] = 1;
    for (const auto& a : neighbors(v)) {
      double nd = d + a.length;
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        queue.emplace(nd, a.to);
      }
    }
  }
  // Anything tentatively labelled but never settled lies past the cutoff.
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (!done[v]) dist[v] = kInfinity;
  }
  return dist;
}

std::vector<std::pair<VertexId, double>> DiscreteSpace::neighborhood(VertexId source, double radius) const {
  if (source >= size()) throw ParameterError("vertex index out of range");
  std::unordered_map<VertexId, double> tentative;
  std::vector<std::pair<VertexId, double>> settled;
  MinQueue queue;
  tentative[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > tentative[v]) continue;
    if (d > radius) break;
    settled.emplace_back(v, d);
    tentative[v] = -1.0;  // settled marker
    for (const auto& a : neighbors(v)) {
      double nd = d + a.length;
      auto it = tentative.find(a.to);
      if (it == tentative.end()) {
        tentative.emplace(a.to, nd);
        queue.emplace(nd, a.to);
      } else if (it->second >= 0.0 && nd < it->second) {
        it->second = nd;
        queue.emplace(nd, a.to);
      }
    }
  }
  return settled;
}

double DiscreteSpace::eccentricity(VertexId v) const {
  const auto& row = distances_from(v);
  return *std::max_element(row.begin(), row.end());
}

std::vector<std::vector<double>> distance_matrix(const DiscreteSpace& space) {
  std::vector<std::vector<double>> out;
  out.reserve(space.size());
  for (VertexId v = 0; v < space.size(); ++v) out.push_back(space.distances_from(v));
  // rows from different sources can disagree in the last bit
  for (VertexId i = 0; i < out.size(); ++i)
    for (VertexId j = i + 1; j < out.size(); ++j) out[i][j] = out[j][i] = std::min(out[i][j], out[j][i]);
  return out;
}

Region make_region(const DiscreteSpace& space, VertexSet members, RegionKind kind) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  Region r;
  r.kind = kind;
  double sum = 0.0;
  for (VertexId v : members) {
    if (v >= space.size()) throw ParameterError("region member out of range");
    sum += space.vertex(v).weight;
  }
  r.weight_sum = sum;
  r.measure = space.measure_scale() * sum;
  r.members = std::move(members);
  return r;
}

Region region_from_row(const DiscreteSpace& space, const std::vector<double>& row, RegionKind kind, VertexId x,
                       double r1, double r2, double tau) {
  if (!(r1 >= 0.0) || !(r2 >= 0.0)) throw ParameterError("radii must be nonnegative");
  const double guard = 0.5 * space.mesh();
  VertexSet members;
  switch (kind) {
    case RegionKind::ball:
      for (VertexId v = 0; v < row.size(); ++v)
        if (r1 > 0.0 && row[v] < r1 - guard) members.push_back(v);
      break;
    case RegionKind::closed_ball:
      for (VertexId v = 0; v < row.size(); ++v)
        if (row[v] <= r1 + guard) members.push_back(v);
      break;
    case RegionKind::annulus:
      if (r2 < r1) throw ParameterError("annulus requires r1 <= r2");
      for (VertexId v = 0; v < row.size(); ++v) {
        bool inner_ok = r1 == 0.0 ? true : row[v] > r1 + guard;
        if (inner_ok && row[v] < r2 - guard) members.push_back(v);
      }
      break;
    case RegionKind::sphere:
      for (VertexId v = 0; v < row.size(); ++v)
        if (std::abs(row[v] - r1) <= tau) members.push_back(v);
      break;
    default:
      throw ParameterError("region kind " + to_string(kind) + " is not a metric query");
  }
  Region out = make_region(space, std::move(members), kind);
  out.center = x;
  out.r1 = r1;
  out.r2 = kind == RegionKind::annulus ? r2 : r1;
  return out;
}

Region region(const DiscreteSpace& space, RegionKind kind, VertexId x, double r1, double r2) {
  return region_from_row(space, space.distances_from(x), kind, x, r1, r2, space.tau());
}

Region open_ball(const DiscreteSpace& space, VertexId x, double r) {
  return region(space, RegionKind::ball, x, r);
}
Region closed_ball(const DiscreteSpace& space, VertexId x, double r) {
  return region(space, RegionKind::closed_ball, x, r);
}
Region annulus(const DiscreteSpace& space, VertexId x, double r1, double r2) {
  return region(space, RegionKind::annulus, x, r1, r2);
}
Region sphere(const DiscreteSpace& space, VertexId x, double r, std::optional<double> tau) {
  return region_from_row(space, space.distances_from(x), RegionKind::sphere, x, r, r, tau.value_or(space.tau()));
}

std::vector<Region> components(const DiscreteSpace& space, const Region& region, const VertexSet& excluded) {
  std::vector<char> allowed(space.size(), 0);
  for (VertexId v : region.members) allowed[v] = 1;
  for (VertexId v : excluded)
    if (v < space.size()) allowed[v] = 0;
  std::vector<char> seen(space.size(), 0);
  std::vector<Region> out;
  std::vector<VertexId> stack;
  for (VertexId start : region.members) {
    if (!allowed[start] || seen[start]) continue;
    VertexSet comp;
    stack.assign(1, start);
    seen[start] = 1;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (const auto& a : space.neighbors(v)) {
        if (allowed[a.to] && !seen[a.to]) {
          seen[a.to] = 1;
          stack.push_back(a.to);
        }
      }
    }
    out.push_back(make_region(space, std::move(comp), RegionKind::component));
  }
  return out;
}

ShadowResult geodesic_shadow(const DiscreteSpace& space, VertexId x, const std::vector<double>& row_x,
                             const Region& set, const ShadowParams& params) {
  const double tau = params.tolerance().value_or(space.tau());
  ShadowResult result;
  if (set.empty()) {
    result.empty_input = true;
    result.shadow = make_region(space, {});
    result.shadow.center = x;
    return result;
  }
  std::vector<double> offsets;
  offsets.reserve(set.size());
  for (VertexId z : set.members) {
    double dz = row_x[z];
    if (!(dz > params.r1() - tau) || !(dz < params.r2() + tau)) {
      std::ostringstream out;
      out << "set member '" << space.vertex(z).id << "' at distance " << dz << " lies outside annulus ("
          << params.r1() << ", " << params.r2() << ") beyond tolerance";
      throw ParameterError(out.str());
    }
    offsets.push_back(-dz);
  }
  // excess(y) = min_z d(y,z) - d(x,z); y is between x and some z iff d(x,y) + excess(y) <= tau.
  auto excess = space.offset_distances(set.members, offsets, tau);
  Region window = region_from_row(space, row_x, RegionKind::annulus, x, params.s1(), params.s2(), tau);
  VertexSet members;
  for (VertexId y : window.members) {
    if (row_x[y] + excess[y] <= tau) members.push_back(y);
  }
  result.shadow = make_region(space, std::move(members));
  result.shadow.center = x;
  result.shadow.r1 = params.s1();
  result.shadow.r2 = params.s2();
  return result;
}

ShadowResult geodesic_shadow(const DiscreteSpace& space, VertexId x, const Region& set,
                             const ShadowParams& params) {
  return geodesic_shadow(space, x, space.distances_from(x), set, params);
}

std::vector<VertexId> nearest_source(const DiscreteSpace& space, const VertexSet& sources) {
  std::vector<double> dist(space.size(), kInfinity);
  std::vector<VertexId> owner(space.size(), space.size());
  MinQueue queue;
  for (VertexId s : sources) {
    dist[s] = 0.0;
    owner[s] = s;
    queue.emplace(0.0, s);
  }
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (const Arc& a : space.neighbors(v)) {
      double nd = d + a.length;
      if (nd < dist[a.to] || (nd == dist[a.to] && owner[v] < owner[a.to])) {
        dist[a.to] = nd;
        owner[a.to] = owner[v];
        queue.emplace(nd, a.to);
      }
    }
  }
  return owner;
}

double length_space_defect(const DiscreteSpace& space, const DefectOptions& options) {
  const std::size_t n = space.size();
  auto pair_defect = [&](VertexId a, VertexId b) {
    const auto& ra = space.distances_from(a);
    const auto& rb = space.distances_from(b);
    double best = kInfinity;
    for (VertexId z = 0; z < n; ++z) best = std::min(best, std::max(ra[z], rb[z]));
    return std::max(0.0, best - 0.5 * ra[b]);
  };
  double worst = 0.0;
  const std::size_t all_pairs = n * (n - 1) / 2;
  if (options.max_pairs == 0 || options.max_pairs >= all_pairs) {
    for (VertexId a = 0; a < n; ++a)
      for (VertexId b = a + 1; b < n; ++b) worst = std::max(worst, pair_defect(a, b));
    return worst;
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<VertexId> pick(0, n - 1);
  for (std::size_t i = 0; i < options.max_pairs; ++i) {
    VertexId a = pick(rng), b = pick(rng);
    if (a != b) worst = std::max(worst, pair_defect(a, b));
  }
  return worst;
}

std::vector<BranchingWitness> nonbranching_witnesses(const DiscreteSpace& space, double separation,
                                                     std::size_t max_witnesses) {
  const double half_tol = 0.5 * space.tau();
  const std::size_t n = space.size();
  std::vector<BranchingWitness> out;
  std::vector<VertexId> ends;
  for (VertexId x0 = 0; x0 < n; ++x0) {
    const auto& r0 = space.distances_from(x0);
    for (VertexId y = 0; y < n; ++y) {
      if (y == x0) continue;
      const auto& ry = space.distances_from(y);
      const double half = r0[y];
      ends.clear();
      for (VertexId x = 0; x < n; ++x) {
        if (std::abs(half - 0.5 * r0[x]) <= half_tol && std::abs(ry[x] - 0.5 * r0[x]) <= half_tol) {
          ends.push_back(x);
        }
      }
      for (std::size_t i = 0; i < ends.size(); ++i) {
        const auto& ri = space.distances_from(ends[i]);
        for (std::size_t j = i + 1; j < ends.size(); ++j) {
          if (ri[ends[j]] > separation) {
            out.push_back({y, x0, ends[i], ends[j]});
            if (out.size() >= max_witnesses) return out;
          }
        }
      }
    }
  }
  return out;
}

bool is_convex(const DiscreteSpace& space, const Region& set, std::optional<double> tolerance) {
  if (set.empty()) throw ParameterError("convexity test needs a nonempty set");
  const double tol = tolerance.value_or(0.5 * space.mesh());
  std::vector<char> inside(space.size(), 0);
  for (VertexId v : set.members) inside[v] = 1;
  for (std::size_t i = 0; i < set.members.size(); ++i) {
    const auto& ra = space.distances_from(set.members[i]);
    for (std::size_t j = i + 1; j < set.members.size(); ++j) {
      VertexId b = set.members[j];
      const auto& rb = space.distances_from(b);
      for (VertexId w = 0; w < space.size(); ++w) {
        if (!inside[w] && ra[w] + rb[w] <= ra[b] + tol) return false;
      }
    }
  }
  return true;
}

DiscreteSpace restrict_to(const DiscreteSpace& space, const Region& set) {
  if (set.empty()) throw ParameterError("cannot restrict to an empty set");
  std::vector<VertexId> new_index(space.size(), space.size());
  std::vector<Vertex> vertices;
  vertices.reserve(set.size());
  for (VertexId v : set.members) {
    new_index[v] = vertices.size();
    vertices.push_back(space.vertex(v));
  }
  std::vector<Edge> edges;
  for (const auto& e : space.edges()) {
    if (new_index[e.u] < space.size() && new_index[e.v] < space.size()) {
      edges.push_back(Edge{new_index[e.u], new_index[e.v], e.length});
    }
  }
  try {
    return DiscreteSpace(std::move(vertices), std::move(edges), space.mesh(), space.tau(), space.meta(),
                         space.measure_scale());
  } catch (const SpaceError& err) {
    throw SpaceError(std::string("restriction is not a valid space: ") + err.what());
  }
}

DiscreteSpace rescale(const DiscreteSpace& space, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ParameterError("rescale factors must be positive and finite");
  }
  std::vector<Edge> edges = space.edges();
  for (auto& e : edges) e.length *= a;
  return DiscreteSpace(space.vertices(), std::move(edges), space.mesh() * a, space.tau() * a, space.meta(),
                       space.measure_scale() * b);
}

}  // namespace mms
