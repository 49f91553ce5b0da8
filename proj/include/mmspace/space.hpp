#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace mms {

using VertexId = std::size_t;
// Sorted, duplicate-free list of vertex indices.
using VertexSet = std::vector<VertexId>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Vertex {
  std::string id;
  double weight = 0.0;
  std::string tag;  // optional coordinate label, kept for provenance only
};

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double length = 0.0;
};

struct Arc {
  VertexId to;
  double length;
};

enum class RegionKind { ball, closed_ball, annulus, sphere, component, explicit_set };

std::string to_string(RegionKind kind);

struct Region {
  RegionKind kind = RegionKind::explicit_set;
  std::optional<VertexId> center;
  double r1 = 0.0;
  double r2 = 0.0;
  VertexSet members;
  double measure = 0.0;     // sum of member weights, global measure scale applied
  double weight_sum = 0.0;  // the same sum before the global scale

  bool empty() const { return members.empty(); }
  std::size_t size() const { return members.size(); }
  bool contains(VertexId v) const;
};

// Radii for a shadow configuration: shadow window (s1, s2), set window (r1, r2).
class ShadowParams {
 public:
  ShadowParams(double s1, double s2, double r1, double r2,
               std::optional<double> tolerance = std::nullopt);

  double s1() const { return s1_; }
  double s2() const { return s2_; }
  double r1() const { return r1_; }
  double r2() const { return r2_; }
  const std::optional<double>& tolerance() const { return tolerance_; }

  ShadowParams scaled(double a) const;

 private:
  double s1_, s2_, r1_, r2_;
  std::optional<double> tolerance_;
};

namespace detail {
struct DistanceCache;
}

// Finite weighted graph standing in for a metric measure space. Immutable;
// shortest-path rows are computed lazily and shared between copies.
class DiscreteSpace {
 public:
  DiscreteSpace(std::vector<Vertex> vertices, std::vector<Edge> edges, double mesh,
                std::optional<double> tau = std::nullopt, nlohmann::json meta = nlohmann::json::object(),
                double measure_scale = 1.0);

  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(VertexId v) const { return vertices_.at(v); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Arc> neighbors(VertexId v) const;

  double mesh() const { return mesh_; }
  double tau() const { return tau_; }
  const nlohmann::json& meta() const { return meta_; }
  double measure_scale() const { return measure_scale_; }

  // Measure of the single vertex v.
  double weight(VertexId v) const { return measure_scale_ * vertices_[v].weight; }
  double total_measure() const;

  std::optional<VertexId> find(const std::string& id) const;
  VertexId index_of(const std::string& id) const;

  // Full shortest-path row from `source`; computed once and cached.
  const std::vector<double>& distances_from(VertexId source) const;
  double distance(VertexId a, VertexId b) const;
  // Dijkstra stopped past `radius`; entries beyond it are +inf. Not cached.
  std::vector<double> distances_within(VertexId source, double radius) const;
  // Vertices with d(source, v) <= radius and their distances, in settling order.
  // Cost depends only on the size of the neighbourhood.
  std::vector<std::pair<VertexId, double>> neighborhood(VertexId source, double radius) const;
  // Multi-source Dijkstra: value(y) = min over sources s of offset(s) + d(s, y),
  // explored until values exceed `cutoff`.
  std::vector<double> offset_distances(std::span<const VertexId> sources,
                                       std::span<const double> offsets,
                                       double cutoff = kInfinity) const;

  double eccentricity(VertexId v) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> arc_start_;
  std::vector<Arc> arcs_;
  double mesh_;
  double tau_;
  nlohmann::json meta_;
  double measure_scale_;
  std::shared_ptr<detail::DistanceCache> cache_;
};

// All-pairs distances, symmetrized (per-source rows may differ by one ulp).
std::vector<std::vector<double>> distance_matrix(const DiscreteSpace& space);

Region make_region(const DiscreteSpace& space, VertexSet members,
                   RegionKind kind = RegionKind::explicit_set);

// Metric regions with a half-mesh guard band:
//   open ball      d < r - h/2          (empty for r = 0)
//   closed ball    d <= r + h/2
//   annulus        r1 + h/2 < d < r2 - h/2, and A(0, r) is the open ball
//   sphere         |d - r| <= tau
Region open_ball(const DiscreteSpace& space, VertexId x, double r);
Region closed_ball(const DiscreteSpace& space, VertexId x, double r);
Region annulus(const DiscreteSpace& space, VertexId x, double r1, double r2);
Region sphere(const DiscreteSpace& space, VertexId x, double r, std::optional<double> tau = std::nullopt);
// Generic entry point. Ball kinds and sphere read their radius from r1.
Region region(const DiscreteSpace& space, RegionKind kind, VertexId x, double r1, double r2 = 0.0);

// Same predicates evaluated on a precomputed distance row.
Region region_from_row(const DiscreteSpace& space, const std::vector<double>& row, RegionKind kind,
                       VertexId x, double r1, double r2, double tau);

// Connected components of the subgraph induced on region minus excluded,
// ordered by smallest member.
std::vector<Region> components(const DiscreteSpace& space, const Region& region,
                               const VertexSet& excluded = {});

struct ShadowResult {
  Region shadow;
  bool empty_input = false;  // U was empty, so the ratio is undefined
};

// {y in A(s1, s2)(x) : some z in U has d(x,y) + d(y,z) - d(x,z) <= tau}.
ShadowResult geodesic_shadow(const DiscreteSpace& space, VertexId x, const Region& set,
                             const ShadowParams& params);
// Same, with a precomputed row from x (may be truncated past r2 + tau).
ShadowResult geodesic_shadow(const DiscreteSpace& space, VertexId x, const std::vector<double>& row_x,
                             const Region& set, const ShadowParams& params);

struct DefectOptions {
  std::size_t max_pairs = 0;  // 0 means every pair
  std::uint64_t seed = 1;
};

// For every vertex, the nearest member of `sources` (ties to the smaller source index).
std::vector<VertexId> nearest_source(const DiscreteSpace& space, const VertexSet& sources);

double length_space_defect(const DiscreteSpace& space, const DefectOptions& options = {});

struct BranchingWitness {
  VertexId midpoint, start, end_a, end_b;
};

// Quadruples (y, x0, x1, x2) with y a midpoint of both (x0, x1) and (x0, x2)
// up to tau/2 in each distance, and d(x1, x2) > separation.
std::vector<BranchingWitness> nonbranching_witnesses(const DiscreteSpace& space, double separation,
                                                     std::size_t max_witnesses = 16);

// Betweenness tolerance defaults to h/2 (a tau band would leak one mesh step).
bool is_convex(const DiscreteSpace& space, const Region& set,
               std::optional<double> tolerance = std::nullopt);

DiscreteSpace restrict_to(const DiscreteSpace& space, const Region& set);

DiscreteSpace rescale(const DiscreteSpace& space, double a, double b);

}  // namespace mms
