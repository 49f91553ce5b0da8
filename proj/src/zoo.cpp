#include "mmspace/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>

#include "mmspace/errors.hpp"

namespace mms {

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

std::string coord_tag(double x, double y) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g,%.9g", x, y);
  return buf;
}

// One-dimensional spaces: straight or parametrized pieces subdivided to mesh h,
// with H^1 weights (half the incident edge lengths at each vertex).
class CurveBuilder {
 public:
  explicit CurveBuilder(double h) : h_(h) {}

  VertexId point(double x, double y) {
    xs_.push_back(x);
    ys_.push_back(y);
    weights_.push_back(0.0);
    return xs_.size() - 1;
  }

  std::vector<VertexId> segment(VertexId a, VertexId b) {
    double ax = xs_[a], ay = ys_[a], bx = xs_[b], by = ys_[b];
    double len = std::hypot(bx - ax, by - ay);
    return curve(a, b, len, [=](double t) { return std::pair{ax + t * (bx - ax), ay + t * (by - ay)}; });
  }

  // Curve of intrinsic length `len` from a to b; `at(t)` gives coordinates for t in [0,1].
  std::vector<VertexId> curve(VertexId a, VertexId b, double len,
                              const std::function<std::pair<double, double>(double)>& at,
                              std::size_t min_pieces = 1, bool even = false) {
    std::size_t pieces = std::max<std::size_t>(min_pieces, static_cast<std::size_t>(std::ceil(len / h_ - 1e-9)));
    if (even && pieces % 2 == 1) ++pieces;
    double step = len / static_cast<double>(pieces);
    std::vector<VertexId> ids{a};
    for (std::size_t i = 1; i < pieces; ++i) {
      auto [x, y] = at(static_cast<double>(i) / static_cast<double>(pieces));
      ids.push_back(point(x, y));
    }
    ids.push_back(b);
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) link(ids[i], ids[i + 1], step);
    return ids;
  }

  void link(VertexId a, VertexId b, double len) {
    edges_.push_back(Edge{a, b, len});
    weights_[a] += 0.5 * len;
    weights_[b] += 0.5 * len;
    max_edge_ = std::max(max_edge_, len);
  }

  void name(const std::string& label, VertexId v) { names_[label] = std::to_string(v); }

  VertexId nearest(double x, double y) const {
    VertexId best = 0;
    for (VertexId v = 0; v < xs_.size(); ++v)
      if (std::hypot(xs_[v] - x, ys_[v] - y) < std::hypot(xs_[best] - x, ys_[best] - y)) best = v;
    return best;
  }

  DiscreteSpace build(json meta) const {
    std::vector<Vertex> vertices;
    for (VertexId v = 0; v < xs_.size(); ++v)
      vertices.push_back(Vertex{std::to_string(v), weights_[v], coord_tag(xs_[v], ys_[v])});
    meta["points"] = names_;
    return DiscreteSpace(std::move(vertices), edges_, max_edge_, std::nullopt, std::move(meta));
  }

 private:
  double h_;
  double max_edge_ = 0.0;
  std::vector<double> xs_, ys_, weights_;
  std::vector<Edge> edges_;
  std::map<std::string, std::string> names_;
};

// King-graph lattice on cells (i h, j h) with cell-area weights.
DiscreteSpace lattice_2d(double h, int imin, int imax, int jmin, int jmax,
                         const std::function<double(int, int)>& area, const std::function<bool(int, int)>& forced,
                         json meta, const std::map<std::string, std::pair<int, int>>& named) {
  const int ni = imax - imin + 1, nj = jmax - jmin + 1;
  std::vector<long> index(static_cast<std::size_t>(ni) * nj, -1);
  std::vector<Vertex> vertices;
  auto slot = [&](int i, int j) -> long& { return index[static_cast<std::size_t>(j - jmin) * ni + (i - imin)]; };
  for (int j = jmin; j <= jmax; ++j) {
    for (int i = imin; i <= imax; ++i) {
      double w = area(i, j);
      if (w > 0.0 || forced(i, j)) {
        slot(i, j) = static_cast<long>(vertices.size());
        vertices.push_back(Vertex{std::to_string(vertices.size()), w, coord_tag(i * h, j * h)});
      }
    }
  }
  std::vector<Edge> edges;
  const double diag = h * std::sqrt(2.0);
  for (int j = jmin; j <= jmax; ++j) {
    for (int i = imin; i <= imax; ++i) {
      long a = slot(i, j);
      if (a < 0) continue;
      const int di[4] = {1, -1, 0, 1};
      const int dj[4] = {0, 1, 1, 1};
      for (int t = 0; t < 4; ++t) {
        int i2 = i + di[t], j2 = j + dj[t];
        if (i2 < imin || i2 > imax || j2 < jmin || j2 > jmax) continue;
        long b = slot(i2, j2);
        if (b < 0) continue;
        edges.push_back(Edge{static_cast<VertexId>(a), static_cast<VertexId>(b), (di[t] != 0 && dj[t] != 0) ? diag : h});
      }
    }
  }
  json points = json::object();
  for (const auto& [label, ij] : named) {
    long v = slot(ij.first, ij.second);
    if (v >= 0) points[label] = std::to_string(v);
  }
  meta["points"] = points;
  return DiscreteSpace(std::move(vertices), std::move(edges), h, std::nullopt, std::move(meta));
}

double overlap(double a0, double a1, double b0, double b1) { return std::max(0.0, std::min(a1, b1) - std::max(a0, b0)); }

struct Params {
  std::string family;
  std::map<std::string, double> values;
  double get(const std::string& key) const { return values.at(key); }
  int count(const std::string& key) const { return static_cast<int>(std::llround(values.at(key))); }
};

double default_mesh(double fallback) {
  if (const char* env = std::getenv(kMeshEnv)) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v > 0.0 && std::isfinite(v)) return v;
    throw ParameterError(std::string(kMeshEnv) + " must be a positive number");
  }
  return fallback;
}

struct Family {
  std::string name;
  std::vector<ZooParam> params;
  std::function<DiscreteSpace(const Params&, json)> make;
};

DiscreteSpace make_interval(const Params& p, json meta) {
  double L = p.get("L"), h = p.get("h");
  CurveBuilder b(h);
  VertexId left = b.point(0, 0), right = b.point(L, 0);
  b.segment(left, right);
  b.name("left", left);
  b.name("right", right);
  b.name("middle", b.nearest(L / 2, 0));
  b.name("third", b.nearest(L / 3, 0));
  return b.build(std::move(meta));
}

DiscreteSpace make_cycle(const Params& p, json meta) {
  double L = p.get("L"), h = p.get("h");
  double radius = L / (2 * kPi);
  CurveBuilder b(h);
  VertexId start = b.point(radius, 0);
  // closed curve: run to a temporary end then fold it onto the start
  std::size_t pieces = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(L / h - 1e-9)));
  double step = L / static_cast<double>(pieces);
  VertexId prev = start;
  for (std::size_t i = 1; i < pieces; ++i) {
    double a = 2 * kPi * static_cast<double>(i) / static_cast<double>(pieces);
    VertexId v = b.point(radius * std::cos(a), radius * std::sin(a));
    b.link(prev, v, step);
    prev = v;
  }
  b.link(prev, start, step);
  b.name("start", start);
  b.name("antipode", b.nearest(-radius, 0));
  return b.build(std::move(meta));
}

DiscreteSpace make_star(const Params& p, json meta) {
  int d = p.count("d");
  double L = p.get("L"), h = p.get("h");
  CurveBuilder b(h);
  VertexId c = b.point(0, 0);
  for (int j = 0; j < d; ++j) {
    double a = 2 * kPi * j / d;
    VertexId tip = b.point(L * std::cos(a), L * std::sin(a));
    b.segment(c, tip);
    b.name("tip" + std::to_string(j), tip);
  }
  b.name("center", c);
  return b.build(std::move(meta));
}

DiscreteSpace make_spokes(const Params& p, json meta) {
  int m = p.count("m");
  double h = p.get("h");
  CurveBuilder b(h);
  VertexId o = b.point(0, 0);
  for (int i = 0; i < m; ++i) {
    double len = std::ldexp(1.0, -i), a = std::ldexp(kPi, -i);
    b.segment(o, b.point(len * std::cos(a), len * std::sin(a)));
  }
  b.name("origin", o);
  return b.build(std::move(meta));
}

DiscreteSpace make_tangent_circles(const Params& p, json meta) {
  int m = p.count("m");
  double h = p.get("h");
  CurveBuilder b(h);
  VertexId o = b.point(0, 0);
  for (int i = 1; i <= m; ++i) {
    double rad = 1.0 / i;
    // from the origin around the circle centred at (0, rad) and back
    auto at = [rad](double t) {
      double a = -kPi / 2 + 2 * kPi * t;
      return std::pair{rad * std::cos(a), rad + rad * std::sin(a)};
    };
    b.curve(o, o, 2 * kPi * rad, at, 8, true);
  }
  b.name("origin", o);
  return b.build(std::move(meta));
}

DiscreteSpace make_comb(const Params& p, json meta) {
  int m = p.count("m");
  double h = p.get("h");
  CurveBuilder b(h);
  VertexId o = b.point(0, 0);
  std::vector<VertexId> on_x{o}, on_y{o};
  for (int i = m; i >= 0; --i) {
    double s = std::ldexp(1.0, -i);
    on_x.push_back(b.point(s, 0));
    on_y.push_back(b.point(0, s));
  }
  for (std::size_t i = 0; i + 1 < on_x.size(); ++i) {
    b.segment(on_x[i], on_x[i + 1]);
    b.segment(on_y[i], on_y[i + 1]);
  }
  for (std::size_t i = 1; i < on_x.size(); ++i) b.segment(on_y[i], on_x[i]);
  b.name("origin", o);
  return b.build(std::move(meta));
}

DiscreteSpace make_circle_plus_ray(const Params& p, json meta) {
  double L = p.get("L"), h = p.get("h");
  CurveBuilder b(h);
  VertexId junction = b.point(1, 0);
  auto ids = b.curve(junction, junction, 2 * kPi,
                     [](double t) { return std::pair{std::cos(2 * kPi * t), std::sin(2 * kPi * t)}; }, 8, true);
  VertexId antipode = ids[(ids.size() - 1) / 2];
  VertexId tip = b.point(1 + L, 0);
  b.segment(junction, tip);
  b.name("junction", junction);
  b.name("antipode", antipode);
  b.name("tip", tip);
  b.name("ray_middle", b.nearest(1 + L / 2, 0));
  return b.build(std::move(meta));
}

DiscreteSpace make_ladder(const Params& p, json meta) {
  int m = p.count("m");
  double h = p.get("h");
  CurveBuilder b(h);
  std::vector<std::pair<double, VertexId>> base{{0.0, b.point(0, 0)}};
  for (int i = m; i >= 1; --i) {
    double x = 2.0 / i;
    VertexId foot = b.point(x, 0);
    base.emplace_back(x, foot);
    VertexId top = b.point(x, 2);
    b.segment(foot, top);
    b.name("tooth" + std::to_string(i) + "_foot", foot);
  }
  for (std::size_t i = 0; i + 1 < base.size(); ++i) b.segment(base[i].second, base[i + 1].second);
  for (int i = 1; i <= m; ++i) b.name("tooth" + std::to_string(i) + "_mid", b.nearest(2.0 / i, 1.0 / i));
  b.name("corner", base.front().second);
  return b.build(std::move(meta));
}

DiscreteSpace make_three_pronged(const Params& p, json meta) {
  const double h = p.get("h"), P = p.get("P"), w = p.get("w"), S = p.get("S"), sw = p.get("sw");
  const double neck = p.get("neck") > 0 ? p.get("neck") : 0.25 * h;
  const int imax = static_cast<int>(std::ceil(P / h)) + 1;
  const int jmax = static_cast<int>(std::ceil((h + w) / h)) + 1;
  const int jmin = -static_cast<int>(std::ceil((h + S) / h)) - 1;
  auto area = [&](int i, int j) {
    double x0 = i * h - h / 2, x1 = i * h + h / 2, y0 = j * h - h / 2, y1 = j * h + h / 2;
    double bar = overlap(x0, x1, -P, P) * overlap(y0, y1, h, h + w);
    double stem = overlap(x0, x1, -sw / 2, sw / 2) * overlap(y0, y1, -h - S, -h);
    if (i == 0 && j == 0) return neck * h;
    return bar + stem;
  };
  auto forced = [](int i, int j) { return i == 0 && j == 0; };
  return lattice_2d(h, -imax, imax, jmin, jmax, area, forced, std::move(meta),
                    {{"pinch", {0, 0}}, {"bar_center", {0, static_cast<int>(std::llround((h + w / 2) / h))}}});
}

DiscreteSpace make_cusp(const Params& p, json meta) {
  if (p.count("n") != 2) throw ParameterError("cusp: only n = 2 is implemented");
  const double h = p.get("h"), alpha = p.get("alpha"), L = p.get("L");
  const int jmax = static_cast<int>(std::floor(L / h + 1e-9));
  const int imax = static_cast<int>(std::ceil(std::pow(L, alpha) / h)) + 1;
  // width of the region at height y is 2|y|^alpha; integrate the cell overlap by Simpson
  auto area = [&](int i, int j) {
    double x0 = i * h - h / 2, x1 = i * h + h / 2;
    double y0 = std::max(j * h - h / 2, -L), y1 = std::min(j * h + h / 2, L);
    if (y1 <= y0) return 0.0;
    auto f = [&](double y) {
      double half = std::pow(std::abs(y), alpha);
      return overlap(x0, x1, -half, half);
    };
    const int pieces = 200;
    double step = (y1 - y0) / pieces, sum = f(y0) + f(y1);
    for (int k = 1; k < pieces; ++k) sum += f(y0 + k * step) * (k % 2 == 1 ? 4.0 : 2.0);
    return sum * step / 3.0;
  };
  auto forced = [](int i, int) { return i == 0; };
  return lattice_2d(h, -imax, imax, -jmax, jmax, area, forced, std::move(meta), {{"origin", {0, 0}}});
}

DiscreteSpace make_grid(const Params& p, json meta) {
  const int n = p.count("n");
  const double L = p.get("L");
  const int N = std::max(1, static_cast<int>(std::ceil(L / p.get("h") - 1e-9)));
  const double h = L / N;
  const int side = N + 1;
  std::size_t total = 1;
  for (int t = 0; t < n; ++t) total *= static_cast<std::size_t>(side);
  auto coords = [&](std::size_t idx) {
    std::vector<int> c(n);
    for (int t = 0; t < n; ++t) {
      c[t] = static_cast<int>(idx % side);
      idx /= side;
    }
    return c;
  };
  std::vector<Vertex> vertices;
  for (std::size_t v = 0; v < total; ++v) {
    auto c = coords(v);
    double w = 1.0;
    std::ostringstream tag;
    for (int t = 0; t < n; ++t) {
      w *= (c[t] == 0 || c[t] == N) ? 0.5 * h : h;
      tag << (t ? "," : "") << c[t] * h;
    }
    vertices.push_back(Vertex{std::to_string(v), w, tag.str()});
  }
  std::vector<Edge> edges;
  int offsets = 1;
  for (int t = 0; t < n; ++t) offsets *= 3;
  for (std::size_t v = 0; v < total; ++v) {
    auto c = coords(v);
    for (int o = 0; o < offsets; ++o) {
      int code = o, nonzero = 0;
      bool ok = true;
      std::size_t target = 0, mult = 1;
      bool forward = false, decided = false;
      for (int t = 0; t < n; ++t) {
        int d = code % 3 - 1;
        code /= 3;
        if (d != 0) {
          ++nonzero;
          if (!decided) {
            forward = d > 0;
            decided = true;
          }
        }
        int ct = c[t] + d;
        if (ct < 0 || ct > N) ok = false;
        target += static_cast<std::size_t>(std::max(ct, 0)) * mult;
        mult *= static_cast<std::size_t>(side);
      }
      if (!ok || nonzero == 0 || !forward) continue;  // each undirected edge once
      edges.push_back(Edge{v, target, h * std::sqrt(static_cast<double>(nonzero))});
    }
  }
  json points = json::object();
  std::size_t center = 0, corner = 0, mult = 1;
  for (int t = 0; t < n; ++t) {
    center += static_cast<std::size_t>(N / 2) * mult;
    mult *= static_cast<std::size_t>(side);
  }
  points["center"] = std::to_string(center);
  points["corner"] = std::to_string(corner);
  meta["points"] = points;
  return DiscreteSpace(std::move(vertices), std::move(edges), h, std::nullopt, std::move(meta));
}

const std::vector<Family>& registry() {
  static const std::vector<Family> families = [] {
    auto mesh = [](double fallback) {
      return ZooParam{"h", fallback, 1e-5, 10.0, false, "mesh (edge length target)"};
    };
    std::vector<Family> f;
    f.push_back({"interval", {{"L", 1.0, 1e-6, 1e6, false, "length"}, mesh(0.01)}, make_interval});
    f.push_back({"path", {{"L", 100.0, 1e-6, 1e7, false, "length"}, mesh(1.0)}, make_interval});
    f.push_back({"cycle", {{"L", 1.0, 1e-6, 1e6, false, "circumference"}, mesh(0.01)}, make_cycle});
    f.push_back({"star",
                 {{"d", 3, 1, 64, true, "number of arms"}, {"L", 1.0, 1e-6, 1e6, false, "arm length"}, mesh(0.01)},
                 make_star});
    f.push_back({"spokes", {{"m", 5, 1, 12, true, "spokes of length 2^-i, i < m"}, mesh(0.004)}, make_spokes});
    f.push_back({"tangent_circles", {{"m", 2, 1, 32, true, "circles of radius 1/i"}, mesh(0.01)},
                 make_tangent_circles});
    f.push_back({"comb", {{"m", 8, 0, 20, true, "diagonals from (0,2^-i) to (2^-i,0), i <= m"}, mesh(0.005)},
                 make_comb});
    f.push_back({"circle_plus_ray", {{"L", 2.0, 1e-3, 1e4, false, "ray length"}, mesh(0.01)},
                 make_circle_plus_ray});
    f.push_back({"three_pronged",
                 {{"P", 2.0, 1e-3, 1e3, false, "half-length of the top bar"},
                  {"w", 0.5, 1e-3, 1e3, false, "bar thickness"},
                  {"S", 2.0, 1e-3, 1e3, false, "stem length"},
                  {"sw", 0.5, 1e-3, 1e3, false, "stem width"},
                  {"neck", 0.0, 0.0, 1e3, false, "neck width of the pinch cell (0: h/4)"},
                  mesh(0.02)},
                 make_three_pronged});
    f.push_back({"cusp",
                 {{"n", 2, 2, 2, true, "ambient dimension"},
                  {"alpha", 3.0, 0.1, 10.0, false, "cusp exponent, region |x| <= |y|^alpha"},
                  {"L", 0.6, 1e-3, 1.0, false, "height of each half"},
                  mesh(0.01)},
                 make_cusp});
    f.push_back({"grid_Rn",
                 {{"n", 2, 1, 3, true, "dimension"}, {"L", 1.0, 1e-6, 1e3, false, "side length"}, mesh(0.02)},
                 make_grid});
    f.push_back({"ladder_teeth", {{"m", 6, 1, 40, true, "teeth at x = 2/i, i <= m"}, mesh(0.005)}, make_ladder});
    return f;
  }();
  return families;
}

const Family& lookup(const std::string& name) {
  for (const auto& f : registry())
    if (f.name == name) return f;
  std::string known;
  for (const auto& f : registry()) known += (known.empty() ? "" : ", ") + f.name;
  throw ParameterError("unknown zoo family '" + name + "' (known: " + known + ")");
}

}  // namespace

std::vector<std::string> zoo_families() {
  std::vector<std::string> out;
  for (const auto& f : registry()) out.push_back(f.name);
  return out;
}

std::vector<ZooParam> zoo_parameters(const std::string& family) { return lookup(family).params; }

ZooSpec parse_zoo_spec(const std::string& text) {
  std::string body = text;
  if (body.rfind("zoo:", 0) == 0) body = body.substr(4);
  ZooSpec spec;
  auto q = body.find('?');
  spec.family = body.substr(0, q);
  if (spec.family.empty()) throw ParseError("zoo spec '" + text + "' has no family name");
  if (q == std::string::npos) return spec;
  std::stringstream rest(body.substr(q + 1));
  std::string item;
  while (std::getline(rest, item, '&')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("zoo parameter '" + item + "' lacks '='");
    std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    char* end = nullptr;
    double v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') throw ParseError("zoo parameter '" + key + "' is not a number: '" + value + "'");
    if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(v);
    } else {
      spec.params[key] = v;
    }
  }
  return spec;
}

std::string format_zoo_spec(const ZooSpec& spec) {
  std::ostringstream out;
  out << "zoo:" << spec.family;
  char sep = '?';
  for (const auto& [k, v] : spec.params) {
    out << sep << k << '=' << json(v).dump();
    sep = '&';
  }
  if (spec.seed != 0) out << sep << "seed=" << spec.seed;
  return out.str();
}

DiscreteSpace generate(const ZooSpec& spec) {
  const Family& fam = lookup(spec.family);
  Params p{spec.family, {}};
  for (const auto& [key, value] : spec.params) {
    bool known = std::any_of(fam.params.begin(), fam.params.end(), [&](const ZooParam& zp) { return zp.name == key; });
    if (!known) throw ParameterError("zoo family '" + spec.family + "' has no parameter '" + key + "'");
  }
  for (const auto& zp : fam.params) {
    double v = zp.name == "h" ? default_mesh(zp.default_value) : zp.default_value;
    if (auto it = spec.params.find(zp.name); it != spec.params.end()) v = it->second;
    if (!std::isfinite(v) || v < zp.min_value || v > zp.max_value) {
      std::ostringstream out;
      out << spec.family << "." << zp.name << " = " << v << " outside [" << zp.min_value << ", " << zp.max_value << "]";
      throw ParameterError(out.str());
    }
    if (zp.integral && v != std::floor(v)) throw ParameterError(spec.family + "." + zp.name + " must be an integer");
    p.values[zp.name] = v;
  }
  json meta = {{"family", spec.family}, {"params", p.values}};
  if (spec.seed != 0) meta["seed"] = spec.seed;
  return fam.make(p, std::move(meta));
}

VertexId named_point(const DiscreteSpace& space, const std::string& name) {
  const auto& meta = space.meta();
  if (!meta.contains("points") || !meta["points"].contains(name)) {
    throw ParameterError("space has no named point '" + name + "'");
  }
  return space.index_of(meta["points"][name].get<std::string>());
}

}  // namespace mms
