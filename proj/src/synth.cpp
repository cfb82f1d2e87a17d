#include "lanetopo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace lanetopo {

namespace {

// mt19937_64 output mapped to doubles by hand so every platform draws the
// same sequence for a given seed.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive bounds
  int span = hi - lo + 1;
  int v = lo + static_cast<int>(uniform01(rng) * span);
  return std::min(v, hi);
}

}  // namespace

LaneGraph gen_grid(int nx, int ny, const FovSpec& fov, const Config& cfg) {
  if (nx < 0 || ny < 0) throw ParameterError("grid counts must be non-negative");
  for (int n : {nx, ny}) {
    if (n > 0 && 1.0 / (n + 1) <= cfg.merge_radius())
      throw ParameterError("grid spacing falls below the point merge radius");
  }
  std::vector<LaneCurve> curves;
  CurveId id = 0;
  for (int i = 0; i < nx; ++i) {
    double x = static_cast<double>(i + 1) / (nx + 1);
    curves.push_back({id++, CurveRole::Lane, QuadBezier({x, 0}, {x, 0.5}, {x, 1})});
  }
  for (int j = 0; j < ny; ++j) {
    double y = static_cast<double>(j + 1) / (ny + 1);
    curves.push_back({id++, CurveRole::Lane, QuadBezier({0, y}, {0.5, y}, {1, y})});
  }
  for (const auto& b : fov_boundary_curves(id)) curves.push_back(b);
  return LaneGraph(fov, std::move(curves), {});
}

LaneGraph fragment(const LaneGraph& g, CurveId c, double t) {
  const LaneCurve& victim = g.curve(c);
  if (victim.role != CurveRole::Lane) throw ParameterError("only lanes can be fragmented");
  auto [left, right] = split_bezier(victim.bezier, t);

  CurveId max_id = 0;
  for (const auto& lc : g.curves()) max_id = std::max(max_id, lc.id);
  CurveId left_id = max_id + 1;
  CurveId right_id = max_id + 2;

  std::vector<LaneCurve> curves;
  curves.reserve(g.curves().size() + 1);
  for (const auto& lc : g.curves()) {
    if (lc.id == c) {
      curves.push_back({left_id, CurveRole::Lane, left});
      curves.push_back({right_id, CurveRole::Lane, right});
    } else {
      curves.push_back(lc);
    }
  }
  std::vector<std::pair<CurveId, CurveId>> incidence;
  for (auto [from, to] : g.incidence()) {
    if (from == c) from = right_id;
    if (to == c) to = left_id;
    incidence.emplace_back(from, to);
  }
  incidence.emplace_back(left_id, right_id);
  return LaneGraph(g.fov(), std::move(curves), std::move(incidence));
}

LaneGraph gen_random_scene(const SceneParams& params, const Config& cfg) {
  if (params.min_lanes < 0 || params.max_lanes < params.min_lanes)
    throw ParameterError("bad lane count range");
  if (params.curvature < 0.0 || !std::isfinite(params.curvature))
    throw ParameterError("curvature must be non-negative");
  if (!(params.connect_prob >= 0.0 && params.connect_prob <= 1.0))
    throw ParameterError("connect probability outside [0,1]");

  // Lanes live in disjoint slabs: verticals in x-slabs, horizontals in
  // y-slabs. With the lateral bow bounded by the slab width, crossings
  // between the two families are unique and transversal by construction.
  const double margin = 0.06;          // keep slabs off the border
  const double jitter = 0.02;          // endpoint wobble inside the slab
  const double half_width = jitter + params.curvature + 0.01;
  const double usable = 1.0 - 2.0 * margin;
  int capacity = static_cast<int>(usable / (2.0 * half_width + 0.03));

  std::mt19937_64 rng(params.seed);
  std::string last_problem = "lane range exceeds slab capacity";
  for (int attempt = 0; attempt < 100; ++attempt) {
    int total = uniform_int(rng, params.min_lanes, params.max_lanes);
    int n_v = uniform_int(rng, 0, total);
    int n_h = total - n_v;
    if (n_v > capacity || n_h > capacity) continue;

    std::vector<LaneCurve> curves;
    CurveId id = 0;
    auto place_family = [&](int count, bool vertical) {
      if (count == 0) return;
      double pitch = usable / count;
      double wobble = 0.8 * (0.5 * pitch - half_width);
      for (int i = 0; i < count; ++i) {
        double center = margin + pitch * (i + 0.5) + uniform(rng, -wobble, wobble);
        double a0 = center + uniform(rng, -jitter, jitter);
        double a1 = center + uniform(rng, -jitter, jitter);
        double bow = center + uniform(rng, -(jitter + params.curvature), jitter + params.curvature);
        double mid = 0.5 + uniform(rng, -0.25, 0.25);
        bool flip = uniform01(rng) < 0.5;
        Point2 p0 = vertical ? Point2{a0, 0.0} : Point2{0.0, a0};
        Point2 p1 = vertical ? Point2{bow, mid} : Point2{mid, bow};
        Point2 p2 = vertical ? Point2{a1, 1.0} : Point2{1.0, a1};
        if (flip) std::swap(p0, p2);
        curves.push_back({id++, CurveRole::Lane, QuadBezier(p0, p1, p2)});
      }
    };
    place_family(n_v, true);
    place_family(n_h, false);
    for (const auto& b : fov_boundary_curves(id)) curves.push_back(b);

    LaneGraph g(FovSpec{}, std::move(curves), {});
    for (CurveId lane = 0; lane < id; ++lane) {
      if (uniform01(rng) < params.connect_prob)
        g = fragment(g, lane, uniform(rng, 0.35, 0.65));
    }

    auto report = validate_graph(g, cfg);
    if (report.ok()) return g;
    last_problem = to_string(report.violations[0].kind);
  }
  throw GenerationError("no valid scene after 100 attempts; last problem: " + last_problem);
}

namespace {

// clamp that never pushes a value that was already outside back inside;
// keeps deform(g, 0, seed) bit-identical to g.
double gentle_clamp(double v, double lo, double hi) {
  return std::clamp(v, std::min(v, lo), std::max(v, hi));
}

}  // namespace

LaneGraph deform(const LaneGraph& g, double mag, std::uint64_t seed, const Config& cfg) {
  if (!(mag >= 0.0) || !std::isfinite(mag)) throw ParameterError("magnitude must be >= 0");
  std::mt19937_64 rng(seed);

  int nc = static_cast<int>(g.curves().size());
  std::vector<QuadBezier> shapes;
  shapes.reserve(nc);
  for (const auto& c : g.curves()) shapes.push_back(c.bezier);

  // Interior control points first, in curve order.
  for (int i = 0; i < nc; ++i) {
    if (g.curves()[i].role != CurveRole::Lane) continue;
    double dx = uniform(rng, -mag, mag);
    double dy = uniform(rng, -mag, mag);
    shapes[i].p1.x = gentle_clamp(shapes[i].p1.x + dx, 0.001, 0.999);
    shapes[i].p1.y = gentle_clamp(shapes[i].p1.y + dy, 0.001, 0.999);
  }

  // Endpoint junction groups move jointly; groups with a border endpoint
  // slide along that border edge instead. Union-find over endpoint slots
  // (curve index * 2 + start/end), lanes only.
  std::vector<int> parent(2 * nc);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<CurveId, int> index;
  for (int i = 0; i < nc; ++i) index[g.curves()[i].id] = i;
  for (const auto& [from, to] : g.incidence())
    parent[find(index.at(from) * 2 + 1)] = find(index.at(to) * 2);

  std::map<int, std::vector<int>> groups;  // root -> slots (ascending)
  for (int i = 0; i < nc; ++i) {
    if (g.curves()[i].role != CurveRole::Lane) continue;
    groups[find(2 * i)].push_back(2 * i);
    groups[find(2 * i + 1)].push_back(2 * i + 1);
  }

  auto slot_point = [&](int slot) -> Point2& {
    QuadBezier& q = shapes[slot / 2];
    return slot % 2 == 0 ? q.p0 : q.p2;
  };

  // Deterministic group order: by smallest member slot.
  std::vector<std::pair<int, std::vector<int>>> ordered(groups.begin(), groups.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.second.front() < b.second.front(); });

  for (auto& [root, slots] : ordered) {
    Point2 probe = slot_point(slots.front());
    // Which border edge, if any, does this junction sit on?
    int edge = -1;  // 0 bottom, 1 right, 2 top, 3 left
    double best = cfg.endpoint_tol;
    const double d[4] = {std::abs(probe.y), std::abs(probe.x - 1.0), std::abs(probe.y - 1.0),
                         std::abs(probe.x)};
    for (int e = 0; e < 4; ++e) {
      if (d[e] <= best) {
        best = d[e];
        edge = e;
      }
    }
    if (edge >= 0) {
      double slide = uniform(rng, -mag, mag);
      for (int s : slots) {
        Point2& p = slot_point(s);
        if (edge == 0 || edge == 2)
          p.x = gentle_clamp(p.x + slide, 0.01, 0.99);
        else
          p.y = gentle_clamp(p.y + slide, 0.01, 0.99);
      }
    } else {
      double dx = uniform(rng, -mag, mag);
      double dy = uniform(rng, -mag, mag);
      for (int s : slots) {
        Point2& p = slot_point(s);
        p.x = gentle_clamp(p.x + dx, 0.02, 0.98);
        p.y = gentle_clamp(p.y + dy, 0.02, 0.98);
      }
    }
  }

  std::vector<LaneCurve> curves;
  curves.reserve(nc);
  for (int i = 0; i < nc; ++i)
    curves.push_back({g.curves()[i].id, g.curves()[i].role, shapes[i]});
  LaneGraph out(g.fov(), std::move(curves), g.incidence());

  auto report = validate_graph(out, cfg);
  if (!report.ok()) {
    std::ostringstream os;
    os << "deformation breaks the contract: " << to_string(report.violations[0].kind);
    if (!report.violations[0].detail.empty()) os << " (" << report.violations[0].detail << ")";
    throw DeformationRejected(os.str());
  }
  return out;
}

}  // namespace lanetopo
