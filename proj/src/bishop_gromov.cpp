#include "mmspace/bishop_gromov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "mmspace/comparison.hpp"
#include "mmspace/cut_points.hpp"
#include "mmspace/errors.hpp"

namespace mms {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t radius_key(double r) { return static_cast<std::uint64_t>(std::llround(r * 1e9)); }

double snap(double x, double h) { return std::round(x / h) * h; }

bool within_model(double k, double r) { return k <= 0.0 || r <= std::numbers::pi / std::sqrt(k); }

struct Geometry {
  std::vector<VertexId> bases;
  std::vector<double> radii;
  std::vector<double> widths;
  double min_window = 0.0;
  double scale = 0.0;
};

Geometry resolve(const DiscreteSpace& space, const SamplingPlan& plan) {
  Geometry g;
  const double h = space.mesh();
  std::set<VertexId> chosen;
  for (VertexId b : plan.bases) {
    if (b >= space.size()) throw ParameterError("plan base out of range");
    if (chosen.insert(b).second) g.bases.push_back(b);
  }
  std::mt19937_64 rng(mix(plan.seed, 0xb45e));
  std::uniform_int_distribution<VertexId> pick(0, space.size() - 1);
  std::size_t want = std::min(plan.base_count, space.size());
  for (std::size_t tries = 0; g.bases.size() < plan.bases.size() + want && tries < 50 * (want + 1); ++tries) {
    VertexId b = pick(rng);
    if (chosen.insert(b).second) g.bases.push_back(b);
  }
  for (VertexId b : g.bases) g.scale = std::max(g.scale, space.eccentricity(b));
  if (g.scale == 0.0) g.scale = space.eccentricity(0);
  // 40h keeps mesh slack near 0.1; small spaces fall back to a fifth of their scale.
  g.min_window = plan.min_window > 0.0 ? plan.min_window : std::max(4.0 * h, std::min(40.0 * h, 0.2 * g.scale));

  auto add_unique = [](std::vector<double>& v, double x) {
    for (double y : v)
      if (std::abs(x - y) < 1e-12 * std::max(1.0, std::abs(x))) return;
    v.push_back(x);
  };
  if (!plan.radii.empty()) {
    for (double r : plan.radii) {
      if (!(r >= 0.0)) throw ParameterError("plan radii must be nonnegative");
      add_unique(g.radii, r);
    }
  } else {
    add_unique(g.radii, 0.0);
    for (double f : {0.05, 0.1, 0.2, 0.3, 0.45}) {
      double r = snap(f * g.scale, h);
      if (r >= g.min_window) add_unique(g.radii, r);
    }
  }
  if (!plan.widths.empty()) {
    for (double w : plan.widths) {
      if (!(w > 0.0)) throw ParameterError("plan widths must be positive");
      add_unique(g.widths, w);
    }
  } else {
    add_unique(g.widths, std::max(g.min_window, snap(0.1 * g.scale, h)));
  }
  return g;
}

std::vector<std::pair<double, double>> shadow_windows(double r1, double r2, double width, double min_window,
                                                      double h) {
  std::vector<std::pair<double, double>> out;
  auto add = [&](double s1, double s2) {
    if (s1 < 0.0 || s2 - s1 < min_window * (1.0 - 1e-12) || s1 > r1 || s2 > r2) return;
    for (auto& w : out)
      if (w.first == s1 && w.second == s2) return;
    out.emplace_back(s1, s2);
  };
  if (r1 == 0.0) {
    add(0.0, snap(0.5 * r2, h));
    return out;
  }
  for (double s2 : {r1, snap(0.5 * r1, h)}) {
    add(s2 - width, s2);
    add(0.0, s2);
  }
  return out;
}

// Evaluates every shadow window for one (base, U) pair, sharing the excess field.
template <class Visit>
void evaluate_set(const DiscreteSpace& space, VertexId base, const std::vector<double>& row, const Region& set,
                  double r1, double r2, const std::vector<std::pair<double, double>>& windows, double k, double n,
                  const std::string& family, Visit&& visit) {
  if (set.empty() || !(set.weight_sum > 0.0)) return;
  if (!within_model(k, r2)) return;
  const double tau = space.tau();
  std::vector<double> offsets;
  offsets.reserve(set.size());
  for (VertexId z : set.members) offsets.push_back(-row[z]);
  auto excess = space.offset_distances(set.members, offsets, tau);
  const double v_outer = volume(k, n, r1, r2).value;
  for (const auto& [s1, s2] : windows) {
    ShadowParams params(s1, s2, r1, r2);
    Region window = region_from_row(space, row, RegionKind::annulus, base, s1, s2, tau);
    VertexSet members;
    for (VertexId y : window.members)
      if (row[y] + excess[y] <= tau) members.push_back(y);
    BGReport rep;
    rep.base = base;
    rep.U = set;
    rep.params = params;
    rep.shadow = make_region(space, std::move(members));
    rep.shadow.center = base;
    rep.shadow.r1 = s1;
    rep.shadow.r2 = s2;
    rep.rhs_unit = v_outer / volume(k, n, s1, s2).value;
    rep.family = family;
    rep.mesh_slack = 4.0 * space.mesh() / std::min(s2 - s1, r2 - r1);
    if (rep.shadow.weight_sum > 0.0) {
      rep.lhs = set.weight_sum / rep.shadow.weight_sum;
      rep.implied_C = rep.lhs / rep.rhs_unit;
    } else {
      rep.lhs = kInfinity;
      rep.implied_C = kInfinity;
      rep.infinite = true;
    }
    visit(std::move(rep));
  }
}

bool has(const std::vector<SetFamily>& fams, SetFamily f) {
  return std::find(fams.begin(), fams.end(), f) != fams.end();
}

template <class Visit>
void annulus_families(const DiscreteSpace& space, const SamplingPlan& plan, const Geometry& g, double k, double n,
                      Visit&& visit) {
  const double h = space.mesh();
  const double tau = space.tau();
  for (VertexId base : g.bases) {
    const auto& row = space.distances_from(base);
    for (double r1 : g.radii) {
      for (double width : g.widths) {
        double r2 = r1 + width;
        auto windows = shadow_windows(r1, r2, width, g.min_window, h);
        if (windows.empty()) continue;
        Region ring = region_from_row(space, row, RegionKind::annulus, base, r1, r2, tau);
        if (ring.empty()) continue;
        std::uint64_t key = mix(mix(mix(plan.seed, base), radius_key(r1)), radius_key(r2));
        if (has(plan.families, SetFamily::full_annulus)) {
          evaluate_set(space, base, row, ring, r1, r2, windows, k, n, "full_annulus", visit);
        }
        if (has(plan.families, SetFamily::annulus_components)) {
          auto parts = components(space, ring);
          if (parts.size() > 1) {
            for (const auto& part : parts)
              evaluate_set(space, base, row, part, r1, r2, windows, k, n, "annulus_components", visit);
          }
        }
        if (has(plan.families, SetFamily::ball_caps)) {
          Region mid = region_from_row(space, row, RegionKind::sphere, base, 0.5 * (r1 + r2), 0.0, tau);
          if (!mid.empty()) {
            std::mt19937_64 rng(mix(key, 1));
            std::uniform_int_distribution<std::size_t> pick(0, mid.size() - 1);
            double cap = std::max(0.5 * width, 0.25 * (r1 + r2));
            for (std::size_t c = 0; c < plan.caps_per_annulus; ++c) {
              VertexId anchor = mid.members[pick(rng)];
              auto around = space.distances_within(anchor, cap + h);
              VertexSet near;
              for (VertexId v : ring.members)
                if (around[v] <= cap) near.push_back(v);
              evaluate_set(space, base, row, make_region(space, std::move(near)), r1, r2, windows, k, n,
                           "ball_caps", visit);
            }
          }
        }
        if (has(plan.families, SetFamily::random_subsets)) {
          for (std::size_t j = 0; j < plan.random_subsets_per_annulus; ++j) {
            std::mt19937_64 rng(mix(key, 100 + j));
            double keep = j % 2 == 0 ? 0.5 : 0.2;
            std::bernoulli_distribution coin(keep);
            VertexSet chosen;
            for (VertexId v : ring.members)
              if (coin(rng)) chosen.push_back(v);
            evaluate_set(space, base, row, make_region(space, std::move(chosen)), r1, r2, windows, k, n,
                         "random_subsets", visit);
          }
        }
      }
    }
  }
}

std::vector<const CutProfile*> select_cut_points(const std::vector<CutProfile>& found, std::size_t limit) {
  std::vector<const CutProfile*> high, plain, out;
  for (const auto& p : found) (p.degree_estimate >= 3 ? high : plain).push_back(&p);
  for (const auto* p : high) {
    if (out.size() >= limit) return out;
    out.push_back(p);
  }
  std::size_t room = limit - out.size();
  if (plain.size() <= room) {
    out.insert(out.end(), plain.begin(), plain.end());
  } else {
    for (std::size_t i = 0; i < room; ++i) out.push_back(plain[i * plain.size() / room]);
  }
  return out;
}

// Stub configurations around cut points: base at distance l inside one
// component, U = the epsilon-stubs of the other components, shadow window (l - eps, l).
template <class Visit>
void cut_stub_family(const DiscreteSpace& space, const SamplingPlan& plan, const Geometry& g, double k, double n,
                     Visit&& visit) {
  if (space.size() < 3) return;
  const double h = space.mesh();
  const double tau = space.tau();
  const double top = plan.cut_scale > 0.0 ? plan.cut_scale : g.scale;
  auto found = find_local_cut_points(space);
  for (const CutProfile* small : select_cut_points(found, plan.max_cut_points)) {
    const VertexId c = small->point;
    auto prof = cut_profile(space, c, default_radius_grid(space, c, top));
    auto rc = prof.largest_cut_radius();
    if (!rc) continue;
    auto row_c = space.distances_within(c, *rc + tau + h);
    Region ball = region_from_row(space, row_c, RegionKind::closed_ball, c, *rc, *rc, tau);
    auto parts = components(space, ball, {c});
    if (parts.size() < 2) continue;
    std::vector<double> lengths;
    for (double l : {std::max(20.0 * h, 0.25 * *rc), 0.5 * *rc}) {
      l = snap(l, h);
      if (l <= 0.5 * *rc + 1e-12 && l >= 20.0 * h - 1e-12 &&
          std::find(lengths.begin(), lengths.end(), l) == lengths.end())
        lengths.push_back(l);
    }
    for (double l : lengths) {
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& own = parts[i];
        VertexId xi = own.members.front();
        for (VertexId v : own.members)
          if (std::abs(row_c[v] - l) < std::abs(row_c[xi] - l)) xi = v;
        const double li = row_c[xi];
        if (std::abs(li - l) > h) continue;
        for (double eps = 10.0 * h; eps <= li * (1.0 + 1e-12); eps *= 2.0) {
          auto row = space.distances_within(xi, li + eps + 2.0 * tau + h);
          Region ring = region_from_row(space, row, RegionKind::annulus, xi, li, li + eps, tau);
          std::vector<std::pair<double, double>> windows{{li - eps, li}};
          if (li - eps < 0.0) continue;
          VertexSet union_stub;
          std::vector<VertexSet> single;
          for (std::size_t j = 0; j < parts.size(); ++j) {
            if (j == i) continue;
            VertexSet stub;
            for (VertexId v : parts[j].members)
              if (row_c[v] < eps - 0.5 * h && ring.contains(v)) stub.push_back(v);
            union_stub.insert(union_stub.end(), stub.begin(), stub.end());
            single.push_back(std::move(stub));
          }
          evaluate_set(space, xi, row, make_region(space, union_stub), li, li + eps, windows, k, n, "cut_stubs",
                       visit);
          if (single.size() > 1) {
            for (auto& stub : single)
              evaluate_set(space, xi, row, make_region(space, std::move(stub)), li, li + eps, windows, k, n,
                           "cut_stubs", visit);
          }
        }
      }
    }
  }
}

template <class Visit>
void enumerate(const DiscreteSpace& space, double k, double n, const SamplingPlan& plan, Visit&& visit) {
  if (!(n >= 1.0)) throw ParameterError("dimension parameter n must be >= 1");
  Geometry g = resolve(space, plan);
  annulus_families(space, plan, g, k, n, visit);
  if (has(plan.families, SetFamily::cut_stubs)) cut_stub_family(space, plan, g, k, n, visit);
}

auto config_key(const BGReport& r) {
  return std::make_tuple(r.family, r.base, r.params.r1(), r.params.r2(), r.params.s1(), r.params.s2(),
                         r.U.members.empty() ? VertexId{0} : r.U.members.front(), r.U.size());
}

}  // namespace

std::string to_string(SetFamily family) {
  switch (family) {
    case SetFamily::full_annulus: return "full_annulus";
    case SetFamily::annulus_components: return "annulus_components";
    case SetFamily::ball_caps: return "ball_caps";
    case SetFamily::random_subsets: return "random_subsets";
    case SetFamily::cut_stubs: return "cut_stubs";
  }
  return "full_annulus";
}

SetFamily set_family_from_string(const std::string& name) {
  for (auto f : all_set_families())
    if (to_string(f) == name) return f;
  throw ParameterError("unknown set family '" + name + "'");
}

std::vector<SetFamily> all_set_families() {
  return {SetFamily::full_annulus, SetFamily::annulus_components, SetFamily::ball_caps, SetFamily::random_subsets,
          SetFamily::cut_stubs};
}

BGReport bg_ratio(const DiscreteSpace& space, VertexId base, const Region& set, const ShadowParams& params, double k,
                  double n) {
  if (!(set.weight_sum > 0.0)) throw ParameterError("bg_ratio needs a set of positive measure");
  const auto& row = space.distances_from(base);
  auto shadow = geodesic_shadow(space, base, row, set, params);  // also checks U lies in the annulus
  BGReport rep;
  rep.base = base;
  rep.U = set;
  rep.params = params;
  rep.shadow = std::move(shadow.shadow);
  rep.rhs_unit = volume(k, n, params.r1(), params.r2()).value / volume(k, n, params.s1(), params.s2()).value;
  rep.family = "explicit";
  rep.mesh_slack = 4.0 * space.mesh() / std::min(params.s2() - params.s1(), params.r2() - params.r1());
  if (rep.shadow.weight_sum > 0.0) {
    rep.lhs = set.weight_sum / rep.shadow.weight_sum;
    rep.implied_C = rep.lhs / rep.rhs_unit;
  } else {
    rep.lhs = rep.implied_C = kInfinity;
    rep.infinite = true;
  }
  return rep;
}

BGCheck check_bg(const DiscreteSpace& space, double k, double n, double C, const SamplingPlan& plan) {
  BGCheck out;
  enumerate(space, k, n, plan, [&](BGReport&& rep) {
    ++out.configurations;
    out.max_implied_C = std::max(out.max_implied_C, rep.implied_C);
    out.max_mesh_slack = std::max(out.max_mesh_slack, rep.mesh_slack);
    if (!rep.pass_with_slack(C)) out.violations.push_back(std::move(rep));
  });
  std::stable_sort(out.violations.begin(), out.violations.end(),
                   [](const BGReport& a, const BGReport& b) { return config_key(a) < config_key(b); });
  return out;
}

MinCEstimate estimate_min_c(const DiscreteSpace& space, double k, double n, const SamplingPlan& plan) {
  MinCEstimate out;
  enumerate(space, k, n, plan, [&](BGReport&& rep) {
    ++out.configurations;
    if (!out.witness || rep.implied_C > out.value) {
      out.value = rep.implied_C;
      out.mesh_slack = rep.mesh_slack;
      out.witness = std::move(rep);
    }
  });
  return out;
}

BGCheck check_usual_bg(const DiscreteSpace& space, double k, double n, double C, const SamplingPlan& plan) {
  if (!(n >= 1.0)) throw ParameterError("dimension parameter n must be >= 1");
  Geometry g = resolve(space, plan);
  std::vector<double> radii;
  for (double r : g.radii)
    if (r > 0.0) radii.push_back(r);
  for (double r : g.radii)
    for (double w : g.widths)
      if (std::find(radii.begin(), radii.end(), r + w) == radii.end()) radii.push_back(r + w);
  std::sort(radii.begin(), radii.end());
  BGCheck out;
  for (VertexId base : g.bases) {
    const auto& row = space.distances_from(base);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      double r = radii[i];
      if (r < g.min_window) continue;
      Region small = region_from_row(space, row, RegionKind::ball, base, r, r, space.tau());
      if (!(small.weight_sum > 0.0)) continue;
      for (std::size_t j = i + 1; j < radii.size(); ++j) {
        double R = radii[j];
        if (!within_model(k, R)) continue;
        Region big = region_from_row(space, row, RegionKind::ball, base, R, R, space.tau());
        BGReport rep;
        rep.base = base;
        rep.U = big;
        rep.shadow = small;
        rep.params = ShadowParams(0.0, r, 0.0, R);
        rep.lhs = big.weight_sum / small.weight_sum;
        rep.rhs_unit = volume(k, n, 0.0, R).value / volume(k, n, 0.0, r).value;
        rep.implied_C = rep.lhs / rep.rhs_unit;
        rep.family = "ball_ratio";
        rep.mesh_slack = 4.0 * space.mesh() / r;
        ++out.configurations;
        out.max_implied_C = std::max(out.max_implied_C, rep.implied_C);
        out.max_mesh_slack = std::max(out.max_mesh_slack, rep.mesh_slack);
        if (!rep.pass_with_slack(C)) out.violations.push_back(std::move(rep));
      }
    }
  }
  std::stable_sort(out.violations.begin(), out.violations.end(),
                   [](const BGReport& a, const BGReport& b) { return config_key(a) < config_key(b); });
  return out;
}

double doubling_estimate(const DiscreteSpace& space, double R, const DoublingSample& sample) {
  if (!(R >= 0.0)) throw ParameterError("doubling_estimate needs R >= 0");
  std::mt19937_64 rng(mix(sample.seed, 0xd0b1));
  std::uniform_int_distribution<VertexId> pick(0, space.size() - 1);
  std::vector<VertexId> bases;
  for (std::size_t i = 0; i < std::min(sample.base_count, space.size()); ++i) bases.push_back(pick(rng));
  double worst = 1.0;
  for (VertexId b : bases) {
    for (double r = 0.5 * R; r >= 4.0 * space.mesh(); r *= 0.5) {
      auto row = space.distances_within(b, 2.0 * r + space.mesh());
      // closed balls: the open-ball guard eats h/2 from both radii and inflates the ratio at small r
      Region small = region_from_row(space, row, RegionKind::closed_ball, b, r, r, space.tau());
      Region big = region_from_row(space, row, RegionKind::closed_ball, b, 2.0 * r, 2.0 * r, space.tau());
      if (small.weight_sum > 0.0) worst = std::max(worst, big.weight_sum / small.weight_sum);
    }
  }
  return worst;
}

}  // namespace mms
