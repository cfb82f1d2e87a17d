#include "lanetopo/lanegraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "lanetopo/parallel.hpp"

namespace lanetopo {

Point2 world_to_normalized(const FovSpec& fov, Point2 w) {
  double sx = fov.x_max - fov.x_min;
  double sz = fov.z_max - fov.z_min;
  if (!(sx > 0.0) || !(sz > 0.0)) throw ParameterError("field of view has no area");
  return {(w.x - fov.x_min) / sx, (w.y - fov.z_min) / sz};
}

Point2 normalized_to_world(const FovSpec& fov, Point2 p) {
  return {fov.x_min + p.x * (fov.x_max - fov.x_min), fov.z_min + p.y * (fov.z_max - fov.z_min)};
}

std::vector<LaneCurve> fov_boundary_curves(CurveId first_id) {
  auto seg = [](Point2 a, Point2 b) { return QuadBezier(a, 0.5 * (a + b), b); };
  return {
      LaneCurve{first_id + 0, CurveRole::Boundary, seg({0, 0}, {1, 0})},  // bottom
      LaneCurve{first_id + 1, CurveRole::Boundary, seg({1, 0}, {1, 1})},  // right
      LaneCurve{first_id + 2, CurveRole::Boundary, seg({1, 1}, {0, 1})},  // top
      LaneCurve{first_id + 3, CurveRole::Boundary, seg({0, 1}, {0, 0})},  // left
  };
}

LaneGraph::LaneGraph(FovSpec fov, std::vector<LaneCurve> curves,
                     std::vector<std::pair<CurveId, CurveId>> incidence)
    : fov_(fov), curves_(std::move(curves)), incidence_(std::move(incidence)) {
  std::map<CurveId, CurveRole> roles;
  for (const auto& c : curves_) {
    if (!roles.emplace(c.id, c.role).second) {
      std::ostringstream os;
      os << "duplicate curve id " << c.id;
      throw ParameterError(os.str());
    }
  }
  for (const auto& [from, to] : incidence_) {
    auto f = roles.find(from);
    auto t = roles.find(to);
    if (f == roles.end() || t == roles.end()) {
      std::ostringstream os;
      os << "incidence (" << from << ", " << to << ") names a missing curve";
      throw ParameterError(os.str());
    }
    if (f->second != CurveRole::Lane || t->second != CurveRole::Lane) {
      std::ostringstream os;
      os << "incidence (" << from << ", " << to << ") touches a border curve";
      throw ParameterError(os.str());
    }
    if (from == to) {
      std::ostringstream os;
      os << "curve " << from << " connects to itself";
      throw ParameterError(os.str());
    }
  }
  std::sort(incidence_.begin(), incidence_.end());
  incidence_.erase(std::unique(incidence_.begin(), incidence_.end()), incidence_.end());
}

bool LaneGraph::has_curve(CurveId id) const {
  for (const auto& c : curves_)
    if (c.id == id) return true;
  return false;
}

const LaneCurve& LaneGraph::curve(CurveId id) const {
  for (const auto& c : curves_)
    if (c.id == id) return c;
  std::ostringstream os;
  os << "unknown curve id " << id;
  throw ParameterError(os.str());
}

std::vector<CurveId> LaneGraph::lane_ids() const {
  std::vector<CurveId> out;
  for (const auto& c : curves_)
    if (c.role == CurveRole::Lane) out.push_back(c.id);
  return out;
}

std::vector<CurveId> LaneGraph::boundary_ids() const {
  std::vector<CurveId> out;
  for (const auto& c : curves_)
    if (c.role == CurveRole::Boundary) out.push_back(c.id);
  return out;
}

int LaneGraph::lane_count() const { return static_cast<int>(lane_ids().size()); }

bool LaneGraph::connected(CurveId from, CurveId to) const {
  return std::binary_search(incidence_.begin(), incidence_.end(), std::make_pair(from, to));
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::MultipleIntersections: return "multiple_intersections";
    case ViolationKind::SelfIntersection: return "self_intersection";
    case ViolationKind::FloatingCurve: return "floating_curve";
    case ViolationKind::IncidenceGap: return "incidence_gap";
    case ViolationKind::OutOfBounds: return "out_of_bounds";
    case ViolationKind::BadBoundary: return "bad_boundary";
  }
  return "unknown";
}

int assumption_id(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::MultipleIntersections: return 1;
    case ViolationKind::SelfIntersection: return 2;
    case ViolationKind::FloatingCurve: return 3;
    default: return 0;
  }
}

namespace {

double point_to_segment(Point2 p, Point2 a, Point2 b) {
  Point2 d = b - a;
  double len2 = dot(d, d);
  double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  return dist(p, a + t * d);
}

double border_distance(Point2 p) {
  const Point2 c[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  double best = point_to_segment(p, c[0], c[1]);
  best = std::min(best, point_to_segment(p, c[1], c[2]));
  best = std::min(best, point_to_segment(p, c[2], c[3]));
  return std::min(best, point_to_segment(p, c[3], c[0]));
}

void check_boundaries(const LaneGraph& g, const Config& cfg, std::vector<Violation>& out) {
  auto ids = g.boundary_ids();
  if (ids.size() != 4) {
    std::ostringstream os;
    os << "expected 4 border curves, found " << ids.size();
    out.push_back({ViolationKind::BadBoundary, ids, os.str()});
    return;
  }
  const Point2 corners[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  bool covered[4] = {false, false, false, false};  // bottom, right, top, left
  for (CurveId id : ids) {
    const QuadBezier& c = g.curve(id).bezier;
    int c0 = -1, c2 = -1;
    for (int k = 0; k < 4; ++k) {
      if (dist(c.p0, corners[k]) <= cfg.endpoint_tol) c0 = k;
      if (dist(c.p2, corners[k]) <= cfg.endpoint_tol) c2 = k;
    }
    if (c0 < 0 || c2 < 0 || c0 == c2) {
      out.push_back({ViolationKind::BadBoundary, {id},
                     "border curve endpoints are not two distinct corners"});
      continue;
    }
    // edge index by the corner pair: bottom {0,1}, right {1,2}, top {2,3}, left {3,0}
    int lo = std::min(c0, c2), hi = std::max(c0, c2);
    int edge = -1;
    if (lo == 0 && hi == 1) edge = 0;
    else if (lo == 1 && hi == 2) edge = 1;
    else if (lo == 2 && hi == 3) edge = 2;
    else if (lo == 0 && hi == 3) edge = 3;
    if (edge < 0) {
      out.push_back({ViolationKind::BadBoundary, {id}, "border curve spans a diagonal"});
      continue;
    }
    if (point_to_segment(c.p1, c.p0, c.p2) > cfg.endpoint_tol) {
      out.push_back({ViolationKind::BadBoundary, {id}, "border curve is not straight"});
      continue;
    }
    if (covered[edge]) {
      out.push_back({ViolationKind::BadBoundary, {id}, "border edge covered twice"});
      continue;
    }
    covered[edge] = true;
  }
  for (int e = 0; e < 4; ++e) {
    if (!covered[e]) {
      const char* names[4] = {"bottom", "right", "top", "left"};
      std::ostringstream os;
      os << names[e] << " border edge not covered";
      out.push_back({ViolationKind::BadBoundary, ids, os.str()});
    }
  }
}

}  // namespace

ValidationReport validate_graph(const LaneGraph& g, const Config& cfg) {
  ValidationReport report;
  auto& out = report.violations;

  check_boundaries(g, cfg, out);

  // Lanes must stay inside the normalized field of view.
  for (const auto& c : g.curves()) {
    if (c.role != CurveRole::Lane) continue;
    bool outside = false;
    for (const Point2& p : sample_polyline(c.bezier, 65)) {
      if (p.x < -cfg.geom_tol || p.x > 1.0 + cfg.geom_tol || p.y < -cfg.geom_tol ||
          p.y > 1.0 + cfg.geom_tol) {
        outside = true;
        break;
      }
    }
    if (outside)
      out.push_back({ViolationKind::OutOfBounds, {c.id}, "curve leaves the field of view"});
  }

  // Assumption 2: a curve must not intersect itself. A quadratic can only
  // retrace when its control polygon is collinear and doubles back, or close
  // up when its endpoints coincide.
  for (const auto& c : g.curves()) {
    const QuadBezier& q = c.bezier;
    Point2 u = q.p1 - q.p0;
    Point2 v = q.p2 - q.p1;
    bool closed = dist(q.p0, q.p2) <= cfg.merge_radius();
    bool collinear = std::abs(cross(u, v)) <= cfg.geom_tol * (norm(u) + norm(v));
    bool doubles_back = collinear && dot(u, v) < 0.0;
    if (closed || doubles_back)
      out.push_back({ViolationKind::SelfIntersection, {c.id},
                     closed ? "curve endpoints coincide" : "curve doubles back on itself"});
  }

  // Assumption 1: every pair of curves intersects at most once.
  std::vector<std::pair<int, int>> pairs;
  int nc = static_cast<int>(g.curves().size());
  for (int i = 0; i < nc; ++i)
    for (int j = i + 1; j < nc; ++j) pairs.emplace_back(i, j);
  std::vector<std::string> pair_fail(pairs.size());
  parallel_for(static_cast<int>(pairs.size()), cfg.jobs, [&](int k) {
    const auto& a = g.curves()[pairs[k].first];
    const auto& b = g.curves()[pairs[k].second];
    try {
      intersect_curves(a.bezier, b.bezier, cfg.geom_tol);
    } catch (const AssumptionViolation& v) {
      pair_fail[k] = v.what();
    }
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (!pair_fail[k].empty()) {
      CurveId a = g.curves()[pairs[k].first].id;
      CurveId b = g.curves()[pairs[k].second].id;
      out.push_back({ViolationKind::MultipleIntersections, {a, b}, pair_fail[k]});
    }
  }

  // Connected endpoints must coincide up to the endpoint tolerance.
  for (const auto& [from, to] : g.incidence()) {
    double gap = dist(g.curve(from).bezier.p2, g.curve(to).bezier.p0);
    if (gap > cfg.endpoint_tol) {
      std::ostringstream os;
      os << "connected endpoints are " << gap << " apart";
      out.push_back({ViolationKind::IncidenceGap, {from, to}, os.str()});
    }
  }

  // Assumption 3: every lane endpoint either continues into another lane or
  // rests on the field-of-view border.
  for (const auto& c : g.curves()) {
    if (c.role != CurveRole::Lane) continue;
    bool start_connected = false, end_connected = false;
    for (const auto& [from, to] : g.incidence()) {
      if (to == c.id) start_connected = true;
      if (from == c.id) end_connected = true;
    }
    if (!start_connected && border_distance(c.bezier.p0) > cfg.endpoint_tol)
      out.push_back({ViolationKind::FloatingCurve, {c.id}, "start point floats"});
    if (!end_connected && border_distance(c.bezier.p2) > cfg.endpoint_tol)
      out.push_back({ViolationKind::FloatingCurve, {c.id}, "end point floats"});
  }

  return report;
}

LaneGraph merge_connected(const LaneGraph& g) {
  // Endpoint slots: curve index * 2 for the start, + 1 for the end.
  int nc = static_cast<int>(g.curves().size());
  std::vector<int> parent(2 * nc);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<CurveId, int> index;
  for (int i = 0; i < nc; ++i) index[g.curves()[i].id] = i;
  for (const auto& [from, to] : g.incidence())
    parent[find(index[from] * 2 + 1)] = find(index[to] * 2);

  auto slot_pos = [&](int slot) {
    const QuadBezier& q = g.curves()[slot / 2].bezier;
    return slot % 2 == 0 ? q.p0 : q.p2;
  };

  // Componentwise midrange per junction group; a pair lands on its midpoint
  // and an already coincident group stays bit-exact ((v + v) / 2 == v).
  std::map<int, std::array<double, 4>> range;  // root -> xmin, xmax, ymin, ymax
  for (int s = 0; s < 2 * nc; ++s) {
    Point2 p = slot_pos(s);
    auto [it, fresh] = range.try_emplace(find(s), std::array<double, 4>{p.x, p.x, p.y, p.y});
    if (!fresh) {
      it->second[0] = std::min(it->second[0], p.x);
      it->second[1] = std::max(it->second[1], p.x);
      it->second[2] = std::min(it->second[2], p.y);
      it->second[3] = std::max(it->second[3], p.y);
    }
  }

  std::vector<LaneCurve> curves;
  curves.reserve(nc);
  for (int i = 0; i < nc; ++i) {
    const LaneCurve& c = g.curves()[i];
    const auto& rs = range[find(i * 2)];
    const auto& re = range[find(i * 2 + 1)];
    Point2 p0{0.5 * (rs[0] + rs[1]), 0.5 * (rs[2] + rs[3])};
    Point2 p2{0.5 * (re[0] + re[1]), 0.5 * (re[2] + re[3])};
    curves.push_back({c.id, c.role, QuadBezier(p0, c.bezier.p1, p2)});
  }
  return LaneGraph(g.fov(), std::move(curves), g.incidence());
}

}  // namespace lanetopo
