#include "mmspace/cut_points.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "mmspace/comparison.hpp"
#include "mmspace/errors.hpp"

namespace mms {

namespace {

struct BallSplit {
  std::vector<Region> parts;   // all components of the closed ball minus the point
  std::vector<double> reach;   // max distance from the point within each part
};

using Neighborhood = std::vector<std::pair<VertexId, double>>;

// Position of each vertex within a neighbourhood list; dense when the
// neighbourhood is a sizeable share of the space, hashed otherwise.
class LocalIndex {
 public:
  LocalIndex(const DiscreteSpace& space, const Neighborhood& near) : dense_(near.size() * 16 > space.size()) {
    if (dense_) {
      slots_.assign(space.size(), -1);
      for (std::size_t i = 0; i < near.size(); ++i) slots_[near[i].first] = static_cast<long>(i);
    } else {
      for (std::size_t i = 0; i < near.size(); ++i) map_.emplace(near[i].first, static_cast<long>(i));
    }
  }
  long operator[](VertexId v) const {
    if (dense_) return slots_[v];
    auto it = map_.find(v);
    return it == map_.end() ? -1 : it->second;
  }

 private:
  bool dense_;
  std::vector<long> slots_;
  std::unordered_map<VertexId, long> map_;
};

// Components of the closed ball minus x, from a truncated neighbourhood of x
// (which must reach past r + h/2). Work is local to the ball.
BallSplit split_closed_ball(const DiscreteSpace& space, const Neighborhood& near, VertexId x, double r) {
  const double limit = r + 0.5 * space.mesh();
  LocalIndex index(space, near);
  std::vector<char> seen(near.size(), 0);
  auto inside = [&](long i) { return i >= 0 && near[i].second <= limit && near[i].first != x; };
  BallSplit out;
  std::vector<long> stack;
  for (long start = 0; start < static_cast<long>(near.size()); ++start) {
    if (!inside(start) || seen[start]) continue;
    VertexSet comp;
    double reach = 0.0;
    stack.assign(1, start);
    seen[start] = 1;
    while (!stack.empty()) {
      long i = stack.back();
      stack.pop_back();
      comp.push_back(near[i].first);
      reach = std::max(reach, near[i].second);
      for (const auto& a : space.neighbors(near[i].first)) {
        long j = index[a.to];
        if (inside(j) && !seen[j]) {
          seen[j] = 1;
          stack.push_back(j);
        }
      }
    }
    out.parts.push_back(make_region(space, std::move(comp), RegionKind::component));
    out.reach.push_back(reach);
  }
  // same order as components(): by smallest member
  std::vector<std::size_t> order(out.parts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return out.parts[a].members.front() < out.parts[b].members.front(); });
  BallSplit sorted;
  for (std::size_t i : order) {
    sorted.parts.push_back(std::move(out.parts[i]));
    sorted.reach.push_back(out.reach[i]);
  }
  return sorted;
}

std::size_t far_count(const BallSplit& split, double r) {
  std::size_t count = 0;
  for (double reach : split.reach)
    if (reach >= 0.5 * r) ++count;
  return count;
}

RCutResult judge(const DiscreteSpace& space, VertexId x, double r, const BallSplit& split, std::size_t degree) {
  RCutResult res;
  res.point = x;
  res.r = r;
  res.degree = degree;
  const double stub = 2.0 * space.mesh();
  bool fail_iii = false;
  for (std::size_t i = 0; i < split.parts.size(); ++i) {
    if (split.reach[i] < stub) continue;
    res.components.push_back(split.parts[i]);
    // members lie within r + h/2, so meeting the sphere means reaching r - tau
    if (split.reach[i] < r - space.tau()) fail_iii = true;
  }
  res.component_count = res.components.size();
  bool fail_ii = res.component_count != degree;
  bool fail_i = res.component_count < 2;
  if (fail_ii) res.failed.push_back(RCutVerdict::fail_ii);
  if (fail_i) res.failed.push_back(RCutVerdict::fail_i);
  if (fail_iii) res.failed.push_back(RCutVerdict::fail_iii);
  res.verdict = res.failed.empty() ? RCutVerdict::pass : res.failed.front();
  return res;
}

void check_grid(const DiscreteSpace& space, const std::vector<double>& grid) {
  if (grid.empty()) throw ParameterError("radius grid is empty");
  for (double r : grid) {
    if (!(r >= 4.0 * space.mesh() * (1.0 - 1e-9))) {
      std::ostringstream out;
      out << "radius " << r << " is below 4h = " << 4.0 * space.mesh() << " (mesh artifact zone)";
      throw ParameterError(out.str());
    }
  }
}

// Anchors: vertices at distance l from x, up to `limit`, spread over the candidates.
std::vector<VertexId> anchors_at(const DiscreteSpace& space, const std::vector<double>& row, double l,
                                 std::size_t limit) {
  std::vector<VertexId> found;
  for (VertexId v = 0; v < row.size(); ++v)
    if (std::abs(row[v] - l) <= 0.5 * space.mesh()) found.push_back(v);
  if (found.empty()) {
    double best = kInfinity;
    for (VertexId v = 0; v < row.size(); ++v) best = std::min(best, std::abs(row[v] - l));
    if (best > space.mesh()) {
      std::ostringstream out;
      out << "no anchor vertex at distance " << l;
      throw ParameterError(out.str());
    }
    for (VertexId v = 0; v < row.size(); ++v)
      if (std::abs(row[v] - l) == best) found.push_back(v);
  }
  if (found.size() <= limit) return found;
  std::vector<VertexId> picked;
  for (std::size_t i = 0; i < limit; ++i) picked.push_back(found[i * found.size() / limit]);
  return picked;
}

}  // namespace

std::string to_string(RCutVerdict verdict) {
  switch (verdict) {
    case RCutVerdict::pass: return "pass";
    case RCutVerdict::fail_i: return "fail(i)";
    case RCutVerdict::fail_ii: return "fail(ii)";
    case RCutVerdict::fail_iii: return "fail(iii)";
  }
  return "fail(i)";
}

std::string to_string(BranchVerdict verdict) {
  return verdict == BranchVerdict::branch ? "branch" : "not_branch";
}

std::string to_string(WeakBranchVerdict verdict) {
  switch (verdict) {
    case WeakBranchVerdict::weak_branch: return "weak_branch";
    case WeakBranchVerdict::not_weak_branch: return "not_weak_branch";
    case WeakBranchVerdict::vacuous: return "vacuous";
  }
  return "vacuous";
}

std::optional<double> CutProfile::largest_cut_radius() const {
  std::optional<double> best;
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (verdicts[i] == RCutVerdict::pass && (!best || radii[i] > *best)) best = radii[i];
  return best;
}

std::vector<double> default_radius_grid(const DiscreteSpace& space, VertexId x, std::optional<double> max_radius) {
  double top = max_radius ? *max_radius : space.eccentricity(x);
  std::vector<double> grid;
  for (double r = 4.0 * space.mesh(); r <= top; r *= 2.0) grid.push_back(r);
  if (grid.empty()) grid.push_back(4.0 * space.mesh());
  return grid;
}

CutProfile cut_profile(const DiscreteSpace& space, VertexId x, const std::vector<double>& radius_grid) {
  check_grid(space, radius_grid);
  if (x >= space.size()) throw ParameterError("vertex index out of range");
  if (space.neighbors(x).empty()) throw ParameterError("cut profile of an isolated vertex");
  double top = *std::max_element(radius_grid.begin(), radius_grid.end());
  auto near = space.neighborhood(x, top + space.tau() + space.mesh());
  CutProfile prof;
  prof.point = x;
  prof.radii = radius_grid;
  std::vector<BallSplit> splits;
  for (double r : radius_grid) {
    splits.push_back(split_closed_ball(space, near, x, r));
    prof.counts.push_back(far_count(splits.back(), r));
  }
  prof.degree_estimate = *std::max_element(prof.counts.begin(), prof.counts.end());
  prof.is_local_cut = prof.degree_estimate >= 2;
  for (std::size_t i = 0; i < radius_grid.size(); ++i) {
    prof.verdicts.push_back(judge(space, x, radius_grid[i], splits[i], prof.degree_estimate).verdict);
  }
  return prof;
}

RCutResult is_r_cut_point(const DiscreteSpace& space, VertexId x, double r, std::optional<std::size_t> degree) {
  check_grid(space, {r});
  std::size_t deg = degree ? *degree : cut_profile(space, x, default_radius_grid(space, x)).degree_estimate;
  auto near = space.neighborhood(x, r + space.tau() + space.mesh());
  return judge(space, x, r, split_closed_ball(space, near, x, r), deg);
}

std::vector<CutProfile> find_local_cut_points(const DiscreteSpace& space, std::vector<double> radius_grid) {
  if (radius_grid.empty()) {
    const double h = space.mesh();
    radius_grid = {4.0 * h, 8.0 * h, 16.0 * h};
  }
  std::vector<CutProfile> out;
  if (space.size() < 2) return out;
  for (VertexId v = 0; v < space.size(); ++v) {
    auto prof = cut_profile(space, v, radius_grid);
    if (prof.is_local_cut) out.push_back(std::move(prof));
  }
  return out;
}

std::size_t ends_at_scale(const DiscreteSpace& space, VertexId base, double R) {
  if (!(R > 0.0)) throw ParameterError("ends_at_scale needs R > 0");
  const auto& row = space.distances_from(base);
  const double guard = 0.5 * space.mesh();
  VertexSet outside;
  for (VertexId v = 0; v < row.size(); ++v)
    if (row[v] >= R - guard) outside.push_back(v);
  std::size_t count = 0;
  for (const auto& part : components(space, make_region(space, outside))) {
    bool far = std::any_of(part.members.begin(), part.members.end(),
                           [&](VertexId v) { return row[v] >= 2.0 * R; });
    if (far) ++count;
  }
  return count;
}

DiamReport diam_check(const DiscreteSpace& space, VertexId x, double r, double k, double n, double C) {
  if (!(C < std::sqrt(2.0))) throw DomainError("diam_check is not applicable for C >= sqrt(2)");
  DiamReport rep;
  rep.point = x;
  rep.r = r;
  rep.k = k;
  rep.n = n;
  rep.C = C;
  rep.delta = delta_threshold(k, n, C, r);
  rep.bound = (2.0 - rep.delta) * r;
  rep.mesh_slack = 2.0 * space.tau();
  auto cut = is_r_cut_point(space, x, r);
  if (cut.verdict != RCutVerdict::pass) {
    rep.reason = "point is not an r-cut point: " + to_string(cut.verdict);
    return rep;
  }
  rep.applicable = true;
  auto row = space.distances_within(x, r + space.tau() + space.mesh());
  for (const auto& part : cut.components) {
    ComponentDiameter cd;
    cd.component_size = part.size();
    VertexSet on_sphere;
    for (VertexId v : part.members)
      if (std::abs(row[v] - r) <= space.tau()) on_sphere.push_back(v);
    cd.sphere_size = on_sphere.size();
    const double reach = 2.0 * (r + space.tau()) + space.mesh();
    for (std::size_t i = 0; i < on_sphere.size(); ++i) {
      auto from = space.distances_within(on_sphere[i], reach);
      for (std::size_t j = i + 1; j < on_sphere.size(); ++j) {
        if (from[on_sphere[j]] > cd.diameter) {
          cd.diameter = from[on_sphere[j]];
          cd.witness_a = on_sphere[i];
          cd.witness_b = on_sphere[j];
        }
      }
    }
    cd.violation = cd.diameter > rep.bound + rep.mesh_slack;
    rep.violation = rep.violation || cd.violation;
    rep.components.push_back(cd);
  }
  return rep;
}

BranchReport branch_point_test(const DiscreteSpace& space, VertexId x, double l, const std::vector<double>& eps_grid,
                               std::optional<double> equidistance_tolerance) {
  if (!(l > 0.0)) throw ParameterError("branch test needs l > 0");
  if (eps_grid.empty()) throw ParameterError("branch test needs a nonempty eps grid");
  const double tol = equidistance_tolerance.value_or(0.5 * space.mesh());
  const double guard = 0.5 * space.mesh();
  const auto& row_x = space.distances_from(x);
  BranchReport rep;
  rep.point = x;
  rep.l = l;
  bool all = true;
  for (VertexId g0 : anchors_at(space, row_x, l, 8)) {
    const auto& row_g = space.distances_from(g0);
    const double through = row_g[x];
    for (double eps : eps_grid) {
      BranchAnchorResult res;
      res.anchor = g0;
      res.eps = eps;
      std::vector<std::pair<double, VertexId>> beyond;
      for (VertexId y = 0; y < row_x.size(); ++y) {
        if (y != x && row_x[y] < eps - guard && row_g[y] > through + guard) beyond.emplace_back(row_g[y], y);
      }
      std::sort(beyond.begin(), beyond.end());
      for (std::size_t i = 0; i + 1 < beyond.size(); ++i) {
        if (beyond[i + 1].first - beyond[i].first <= tol) {
          res.split = true;
          res.pair = std::array<VertexId, 2>{beyond[i].second, beyond[i + 1].second};
          break;
        }
      }
      all = all && res.split;
      rep.results.push_back(res);
    }
  }
  rep.verdict = all ? BranchVerdict::branch : BranchVerdict::not_branch;
  return rep;
}

WeakBranchReport weak_branch_test(const DiscreteSpace& space, VertexId x, double l, double eps) {
  if (!(l > 0.0) || !(eps > 0.0)) throw ParameterError("weak branch test needs l > 0 and eps > 0");
  const double tau = space.tau();
  const double guard = 0.5 * space.mesh();
  const auto& row_x = space.distances_from(x);
  WeakBranchReport rep;
  rep.point = x;
  rep.l = l;
  rep.eps = eps;
  rep.anchors = anchors_at(space, row_x, l, 8);
  bool any_pair = false;
  // Candidate shared points w: tau < d(x,w) < eps.
  VertexSet shared;
  for (VertexId w = 0; w < row_x.size(); ++w)
    if (row_x[w] > tau && row_x[w] < eps) shared.push_back(w);
  for (VertexId g0 : rep.anchors) {
    const auto& row_g = space.distances_from(g0);
    const double through = row_g[x];
    VertexSet ends;
    for (VertexId y = 0; y < row_x.size(); ++y) {
      if (row_x[y] < eps - guard && row_x[y] >= 2.0 * tau && row_g[y] > through + guard) ends.push_back(y);
    }
    for (std::size_t i = 0; i < ends.size(); ++i) {
      const auto& ri = space.distances_from(ends[i]);
      for (std::size_t j = i + 1; j < ends.size(); ++j) {
        const auto& rj = space.distances_from(ends[j]);
        any_pair = true;
        ++rep.pairs_checked;
        bool common = std::any_of(shared.begin(), shared.end(), [&](VertexId w) {
          return row_x[w] + ri[w] <= row_x[ends[i]] + tau && row_x[w] + rj[w] <= row_x[ends[j]] + tau;
        });
        if (!common) {
          rep.verdict = WeakBranchVerdict::not_weak_branch;
          rep.failing = std::array<VertexId, 3>{g0, ends[i], ends[j]};
          return rep;
        }
      }
    }
  }
  rep.verdict = any_pair ? WeakBranchVerdict::weak_branch : WeakBranchVerdict::vacuous;
  return rep;
}

namespace {

struct PointSides {
  VertexId point;
  std::vector<Region> parts;
};

PointSides sides_of(const DiscreteSpace& space, VertexId x, double r) {
  auto near = space.neighborhood(x, r + space.mesh());
  return PointSides{x, split_closed_ball(space, near, x, r).parts};
}

std::optional<std::size_t> part_containing(const PointSides& s, VertexId v) {
  for (std::size_t i = 0; i < s.parts.size(); ++i)
    if (s.parts[i].contains(v)) return i;
  return std::nullopt;
}

VertexSet all_but(const PointSides& s, std::size_t skip) {
  VertexSet out;
  for (std::size_t i = 0; i < s.parts.size(); ++i) {
    if (i == skip) continue;
    out.insert(out.end(), s.parts[i].members.begin(), s.parts[i].members.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

LineArrangement stands_in_line(const DiscreteSpace& space, VertexId a, VertexId b, VertexId c, double r) {
  if (a == b || b == c || a == c) throw LabelingError("distinct points", "triple must consist of distinct points");
  std::array<VertexId, 3> pts{a, b, c};
  std::array<PointSides, 3> sides{sides_of(space, a, r), sides_of(space, b, r), sides_of(space, c, r)};
  std::string last_problem = "no point has the other two in one component of its punctured ball";
  std::string convention = "O_1' contains x2 and x3";
  for (std::size_t first = 0; first < 3; ++first) {
    std::size_t p = (first + 1) % 3, q = (first + 2) % 3;
    auto cp = part_containing(sides[first], pts[p]);
    auto cq = part_containing(sides[first], pts[q]);
    if (!cp || !cq || *cp != *cq) continue;
    double dp = space.distance(pts[first], pts[p]), dq = space.distance(pts[first], pts[q]);
    if (dp == dq) {
      last_problem = "d(x1,x2) equals d(x1,x3)";
      convention = "d(x1,x2) < d(x1,x3)";
      continue;
    }
    if (dq < dp) std::swap(p, q);
    // labels: x1 = pts[first], x2 = pts[p], x3 = pts[q]
    LineArrangement out;
    out.triple = {pts[first], pts[p], pts[q]};
    out.r = r;
    const std::size_t outer1 = *cp;
    out.outer_sizes[0] = sides[first].parts[outer1].size();
    out.inner_sizes[0] = all_but(sides[first], outer1).size();
    std::array<VertexSet, 2> outer;
    std::array<std::size_t, 2> idx{p, q};
    for (int t = 0; t < 2; ++t) {
      auto toward = part_containing(sides[idx[t]], pts[first]);
      if (!toward) {
        throw LabelingError("O_i contains x1", "x1 is not in the punctured closed ball of x" + std::to_string(t + 2));
      }
      out.inner_sizes[t + 1] = sides[idx[t]].parts[*toward].size();
      outer[t] = all_but(sides[idx[t]], *toward);
      out.outer_sizes[t + 1] = outer[t].size();
    }
    VertexSet both;
    std::set_intersection(outer[0].begin(), outer[0].end(), outer[1].begin(), outer[1].end(),
                          std::back_inserter(both));
    out.overlap = both.size();
    out.stands_in_line = !both.empty();
    return out;
  }
  throw LabelingError(convention, "cannot label triple: " + last_problem);
}

AccumulationReport cut_set_accumulation_check(const DiscreteSpace& space, double r, double delta) {
  if (!(delta > 0.0)) throw ParameterError("accumulation check needs delta > 0");
  check_grid(space, {r});
  AccumulationReport rep;
  rep.r = r;
  rep.delta = delta;
  rep.gate = delta * r / 6.0;
  std::vector<double> grid;
  for (double s = 4.0 * space.mesh(); s < r; s *= 2.0) grid.push_back(s);
  grid.push_back(r);
  std::vector<std::size_t> degree(space.size(), 0);
  for (VertexId v = 0; v < space.size(); ++v) {
    if (space.neighbors(v).empty()) continue;
    auto prof = cut_profile(space, v, grid);
    if (prof.verdicts.back() == RCutVerdict::pass) {
      rep.cut_set.push_back(v);
      degree[v] = prof.degree_estimate;
    }
  }
  // single-linkage clusters under the gate
  std::vector<int> cluster(space.size(), -1);
  std::vector<char> in_set(space.size(), 0);
  for (VertexId v : rep.cut_set) in_set[v] = 1;
  for (VertexId start : rep.cut_set) {
    if (cluster[start] >= 0) continue;
    int id = static_cast<int>(rep.chains.size());
    VertexSet members{start};
    cluster[start] = id;
    for (std::size_t i = 0; i < members.size(); ++i) {
      auto row = space.distances_within(members[i], rep.gate);
      for (VertexId w : rep.cut_set) {
        if (cluster[w] < 0 && row[w] < rep.gate) {
          cluster[w] = id;
          members.push_back(w);
        }
      }
    }
    // order along the chain: by distance from the member farthest from `start`
    const auto& from_start = space.distances_from(start);
    VertexId end = *std::max_element(members.begin(), members.end(),
                                     [&](VertexId p, VertexId q) { return from_start[p] < from_start[q]; });
    const auto& from_end = space.distances_from(end);
    std::stable_sort(members.begin(), members.end(),
                     [&](VertexId p, VertexId q) { return from_end[p] < from_end[q]; });
    rep.chains.push_back(std::move(members));
  }
  for (VertexId v : rep.cut_set) {
    if (degree[v] < 3) continue;
    rep.high_degree.push_back(v);
    auto row = space.distances_within(v, rep.gate);
    for (VertexId w : rep.cut_set) {
      if (w != v && degree[w] >= 3 && row[w] < rep.gate) rep.violation = true;
    }
  }
  std::vector<char> gap(space.size(), 0);
  for (const auto& chain : rep.chains) {
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      VertexId p = chain[i], q = chain[i + 1];
      const auto& rp = space.distances_from(p);
      const auto& rq = space.distances_from(q);
      if (rp[q] >= rep.gate) continue;
      for (VertexId w = 0; w < space.size(); ++w) {
        if (!in_set[w] && rp[w] + rq[w] <= rp[q] + 0.5 * space.mesh()) gap[w] = 1;
      }
      if (i + 2 >= chain.size()) continue;
      VertexId s = chain[i + 2];
      if (rp[s] >= rep.gate || rq[s] >= rep.gate) continue;
      ++rep.triples_checked;
      try {
        auto line = stands_in_line(space, p, q, s, r);
        if (!line.stands_in_line) {
          rep.not_in_line.push_back(line.triple);
          rep.violation = true;
        }
      } catch (const LabelingError& err) {
        rep.labeling_failures.push_back(err.what());
      }
    }
  }
  for (VertexId w = 0; w < space.size(); ++w)
    if (gap[w]) rep.gap_vertices.push_back(w);
  return rep;
}

}  // namespace mms
