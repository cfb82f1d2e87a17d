#include "lanetopo/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "lanetopo/parallel.hpp"

namespace lanetopo {

bool IntersectionPoint::touches(CurveId c) const {
  for (const auto& [id, t] : incident)
    if (id == c) return true;
  return false;
}

double IntersectionPoint::param_of(CurveId c) const {
  for (const auto& [id, t] : incident)
    if (id == c) return t;
  std::ostringstream os;
  os << "curve " << c << " not incident to point " << id;
  throw ParameterError(os.str());
}

const CurveOrder& Arrangement::order_of(CurveId c) const {
  for (const auto& o : orders)
    if (o.curve == c) return o;
  std::ostringstream os;
  os << "unknown curve id " << c;
  throw ParameterError(os.str());
}

const LaneCurve& Arrangement::curve(CurveId c) const {
  for (const auto& lc : curves)
    if (lc.id == c) return lc;
  std::ostringstream os;
  os << "unknown curve id " << c;
  throw ParameterError(os.str());
}

std::vector<Point2> Arrangement::segment_polyline(int segment, bool forward, int samples) const {
  if (segment < 0 || segment >= static_cast<int>(segments.size()))
    throw ParameterError("segment id out of range");
  if (samples < 2) throw ParameterError("polyline needs at least 2 samples");
  const Segment& s = segments[segment];
  const QuadBezier& q = curve(s.curve).bezier;
  std::vector<Point2> out;
  out.reserve(samples);
  // Exact merged positions at the ends so that shared edges and closed loops
  // line up bit-exactly; interior points on the true curve.
  out.push_back(points[s.from_point].pos);
  for (int i = 1; i + 1 < samples; ++i) {
    double t = s.t_lo + (s.t_hi - s.t_lo) * (static_cast<double>(i) / (samples - 1));
    out.push_back(eval_bezier(q, t));
  }
  out.push_back(points[s.to_point].pos);
  if (!forward) std::reverse(out.begin(), out.end());
  return out;
}

std::pair<int, int> Arrangement::cycles_of_segment(int segment) const {
  if (segment < 0 || segment >= static_cast<int>(segments.size()))
    throw ParameterError("segment id out of range");
  if (segment_faces_.empty())
    throw ParameterError("cycles not extracted yet");
  return segment_faces_[segment];
}

int Arrangement::component_count() const {
  int n = static_cast<int>(points.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Segment& s : segments) parent[find(s.from_point)] = find(s.to_point);
  int c = 0;
  for (int i = 0; i < n; ++i)
    if (find(i) == i) ++c;
  return c;
}

// ---------------------------------------------------------------------------
// compute_arrangement
// ---------------------------------------------------------------------------

namespace {

struct Contact {
  Point2 pos;
  int ci, cj;  // curve indices into the graph's curve list
  double ti, tj;
};

double snap_param(double t, double param_tol) {
  if (t < param_tol) return 0.0;
  if (t > 1.0 - param_tol) return 1.0;
  return t;
}

}  // namespace

Arrangement compute_arrangement(const LaneGraph& g_in, const Config& cfg) {
  // Snap connected endpoints together first; junctions must be exact shared
  // points for the pair sweep to see them as single contacts.
  LaneGraph g = merge_connected(g_in);

  Arrangement arr;
  arr.fov = g.fov();
  arr.curves = g.curves();
  int nc = static_cast<int>(arr.curves.size());

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < nc; ++i)
    for (int j = i + 1; j < nc; ++j) pairs.emplace_back(i, j);

  std::vector<std::optional<IntersectionHit>> hits(pairs.size());
  parallel_for(static_cast<int>(pairs.size()), cfg.jobs, [&](int k) {
    const LaneCurve& a = arr.curves[pairs[k].first];
    const LaneCurve& b = arr.curves[pairs[k].second];
    try {
      hits[k] = intersect_curves(a.bezier, b.bezier, cfg.geom_tol);
    } catch (const AssumptionViolation& v) {
      throw AssumptionViolation(v.kind(), {a.id, b.id}, v.what());
    }
  });

  std::vector<Contact> contacts;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (!hits[k]) continue;
    contacts.push_back({hits[k]->pos, pairs[k].first, pairs[k].second,
                        snap_param(hits[k]->t_a, cfg.param_tol),
                        snap_param(hits[k]->t_b, cfg.param_tol)});
  }

  // Greedy clustering of contact positions into intersection points.
  struct Cluster {
    Point2 seed;
    std::vector<int> members;  // contact indices
  };
  std::vector<Cluster> clusters;
  for (int i = 0; i < static_cast<int>(contacts.size()); ++i) {
    bool placed = false;
    for (auto& cl : clusters) {
      if (dist(cl.seed, contacts[i].pos) <= cfg.merge_radius()) {
        cl.members.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({contacts[i].pos, {i}});
  }

  struct ProtoPoint {
    Point2 pos;
    std::vector<std::pair<int, double>> incident;  // (curve index, param)
  };
  std::vector<ProtoPoint> protos;
  protos.reserve(clusters.size());
  for (const auto& cl : clusters) {
    ProtoPoint p;
    double xlo = contacts[cl.members[0]].pos.x, xhi = xlo;
    double ylo = contacts[cl.members[0]].pos.y, yhi = ylo;
    std::map<int, std::pair<double, double>> trange;  // curve index -> param min/max
    for (int m : cl.members) {
      const Contact& c = contacts[m];
      xlo = std::min(xlo, c.pos.x);
      xhi = std::max(xhi, c.pos.x);
      ylo = std::min(ylo, c.pos.y);
      yhi = std::max(yhi, c.pos.y);
      for (auto [cidx, t] : {std::make_pair(c.ci, c.ti), std::make_pair(c.cj, c.tj)}) {
        auto [it, fresh] = trange.try_emplace(cidx, std::make_pair(t, t));
        if (!fresh) {
          it->second.first = std::min(it->second.first, t);
          it->second.second = std::max(it->second.second, t);
        }
      }
    }
    p.pos = {0.5 * (xlo + xhi), 0.5 * (ylo + yhi)};
    for (const auto& [cidx, mm] : trange) {
      if (mm.second - mm.first > 1e-3) {
        std::ostringstream os;
        os << "curve " << arr.curves[cidx].id << " passes twice through one merged point";
        throw InternalConsistencyError(os.str());
      }
      p.incident.emplace_back(cidx, 0.5 * (mm.first + mm.second));
    }
    protos.push_back(std::move(p));
  }

  // Point ids follow (y, x) of the merged position.
  std::vector<int> order(protos.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Point2& pa = protos[a].pos;
    const Point2& pb = protos[b].pos;
    return pa.y != pb.y ? pa.y < pb.y : pa.x < pb.x;
  });
  arr.points.reserve(protos.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const ProtoPoint& p = protos[order[rank]];
    IntersectionPoint ip;
    ip.id = static_cast<int>(rank);
    ip.pos = p.pos;
    for (const auto& [cidx, t] : p.incident) ip.incident.emplace_back(arr.curves[cidx].id, t);
    std::sort(ip.incident.begin(), ip.incident.end());
    arr.points.push_back(std::move(ip));
  }

  // Per-curve intersection orders and the segments between them.
  for (int ci = 0; ci < nc; ++ci) {
    CurveOrder ord;
    ord.curve = arr.curves[ci].id;
    std::vector<std::pair<double, int>> along;  // (param, point id)
    for (const auto& ip : arr.points) {
      for (const auto& [id, t] : ip.incident)
        if (id == ord.curve) along.emplace_back(t, ip.id);
    }
    std::sort(along.begin(), along.end());
    for (std::size_t i = 1; i < along.size(); ++i) {
      if (along[i].first - along[i - 1].first <= cfg.param_tol) {
        std::ostringstream os;
        os << "curve " << ord.curve << " has two intersection points at parameter "
           << along[i].first;
        throw InternalConsistencyError(os.str());
      }
    }
    if (along.size() < 2) {
      std::ostringstream os;
      os << "curve " << ord.curve << " has fewer than 2 intersection points; "
         << "was the graph validated?";
      throw InternalConsistencyError(os.str());
    }
    for (const auto& [t, pid] : along) {
      ord.points.push_back(pid);
      ord.params.push_back(t);
    }
    for (std::size_t i = 1; i < along.size(); ++i) {
      Segment s;
      s.id = static_cast<int>(arr.segments.size());
      s.curve = ord.curve;
      s.from_point = along[i - 1].second;
      s.to_point = along[i].second;
      s.t_lo = along[i - 1].first;
      s.t_hi = along[i].first;
      arr.segments.push_back(s);
    }
    arr.orders.push_back(std::move(ord));
  }

  return arr;
}

// ---------------------------------------------------------------------------
// extract_minimal_cycles
// ---------------------------------------------------------------------------

namespace {

double polygon_area(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i)
    a += cross(poly[i], poly[i + 1]);
  a += cross(poly.back(), poly.front());
  return 0.5 * a;
}

Point2 polygon_centroid(const std::vector<Point2>& poly, double area) {
  if (std::abs(area) < 1e-12) {
    Point2 mean{0, 0};
    for (const Point2& p : poly) mean = mean + p;
    return (1.0 / static_cast<double>(poly.size())) * mean;
  }
  double cx = 0.0, cy = 0.0;
  auto acc = [&](Point2 p, Point2 q) {
    double w = cross(p, q);
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  };
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) acc(poly[i], poly[i + 1]);
  acc(poly.back(), poly.front());
  return {cx / (6.0 * area), cy / (6.0 * area)};
}

/// Crossing-number containment; the polyline is treated as closed.
bool point_in_polygon(Point2 q, const std::vector<Point2>& poly) {
  bool inside = false;
  std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = poly[j];
    const Point2& b = poly[i];
    if ((b.y > q.y) != (a.y > q.y)) {
      double x = b.x + (q.y - b.y) / (a.y - b.y) * (a.x - b.x);
      if (q.x < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

Arrangement extract_minimal_cycles(const Arrangement& src, const Config& cfg) {
  Arrangement arr = src;
  arr.cycles.clear();
  int ns = static_cast<int>(arr.segments.size());
  int np = static_cast<int>(arr.points.size());
  if (ns == 0) throw ParameterError("arrangement has no segments");

  // Half-edge h: segment h/2, forward when h is even. next(h) is the
  // clockwise predecessor of twin(h) among the outgoing half-edges at the
  // head of h; walking `next` then traces every face counterclockwise and
  // the outer face clockwise.
  auto origin = [&](int h) {
    const Segment& s = arr.segments[h / 2];
    return h % 2 == 0 ? s.from_point : s.to_point;
  };
  auto head = [&](int h) {
    const Segment& s = arr.segments[h / 2];
    return h % 2 == 0 ? s.to_point : s.from_point;
  };
  auto departure = [&](int h) {
    const Segment& s = arr.segments[h / 2];
    const QuadBezier& q = arr.curve(s.curve).bezier;
    Point2 d = h % 2 == 0 ? bezier_derivative(q, s.t_lo) : -1.0 * bezier_derivative(q, s.t_hi);
    if (norm(d) == 0.0) {
      // Cusp fallback: aim at the middle of the segment.
      Point2 mid = eval_bezier(q, 0.5 * (s.t_lo + s.t_hi));
      Point2 o = arr.points[origin(h)].pos;
      d = h % 2 == 0 ? mid - o : o - mid;
    }
    return d;
  };

  std::vector<std::vector<int>> outgoing(np);
  for (int h = 0; h < 2 * ns; ++h) outgoing[origin(h)].push_back(h);
  std::vector<double> angle(2 * ns);
  for (int h = 0; h < 2 * ns; ++h) {
    Point2 d = departure(h);
    angle[h] = std::atan2(d.y, d.x);
  }
  for (auto& list : outgoing) {
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      if (angle[a] != angle[b]) return angle[a] < angle[b];
      if (arr.segments[a / 2].curve != arr.segments[b / 2].curve)
        return arr.segments[a / 2].curve < arr.segments[b / 2].curve;
      return a < b;
    });
  }
  std::vector<int> slot(2 * ns, -1);  // position of h in outgoing[origin(h)]
  for (const auto& list : outgoing)
    for (std::size_t i = 0; i < list.size(); ++i) slot[list[i]] = static_cast<int>(i);

  auto next = [&](int h) {
    int tw = h ^ 1;
    const auto& list = outgoing[origin(tw)];
    int n = static_cast<int>(list.size());
    return list[(slot[tw] + n - 1) % n];
  };

  // Trace all loops.
  struct Loop {
    std::vector<int> hes;
    std::vector<Point2> poly;
    double area = 0.0;
    Point2 centroid;
  };
  std::vector<Loop> loops;
  std::vector<int> loop_of(2 * ns, -1);
  for (int start = 0; start < 2 * ns; ++start) {
    if (loop_of[start] >= 0) continue;
    Loop lp;
    int h = start;
    do {
      if (loop_of[h] >= 0)
        throw InternalConsistencyError("face tracing revisited a half-edge");
      loop_of[h] = static_cast<int>(loops.size());
      lp.hes.push_back(h);
      h = next(h);
    } while (h != start);
    for (int he : lp.hes) {
      auto pts = arr.segment_polyline(he / 2, he % 2 == 0, cfg.segment_samples);
      if (!lp.poly.empty()) lp.poly.pop_back();  // avoid doubling the junction
      lp.poly.insert(lp.poly.end(), pts.begin(), pts.end());
    }
    lp.poly.pop_back();  // closing point duplicates the start
    lp.area = polygon_area(lp.poly);
    lp.centroid = polygon_centroid(lp.poly, lp.area);
    loops.push_back(std::move(lp));
  }

  // The outer face is the most negative loop (the clockwise walk around
  // everything); other negative loops are holes of some face.
  int nl = static_cast<int>(loops.size());
  int outer = -1;
  for (int i = 0; i < nl; ++i)
    if (outer < 0 || loops[i].area < loops[outer].area) outer = i;
  if (loops[outer].area >= 0.0)
    throw InternalConsistencyError("no clockwise outer loop found");

  std::vector<int> positives;
  std::vector<int> hole_loops;
  for (int i = 0; i < nl; ++i) {
    if (i == outer) continue;
    (loops[i].area >= 0.0 ? positives : hole_loops).push_back(i);
  }

  // Attach each hole to the smallest positive loop containing a probe point
  // just outside the hole's leftmost vertex.
  std::vector<std::vector<int>> holes_of(positives.size());
  for (int hl : hole_loops) {
    Point2 leftmost = loops[hl].poly[0];
    for (const Point2& p : loops[hl].poly)
      if (p.x < leftmost.x || (p.x == leftmost.x && p.y < leftmost.y)) leftmost = p;
    Point2 probe{leftmost.x - 1e-7, leftmost.y + 1e-10};
    int best = -1;
    for (std::size_t pi = 0; pi < positives.size(); ++pi) {
      const Loop& cand = loops[positives[pi]];
      if (!point_in_polygon(probe, cand.poly)) continue;
      if (best < 0 || cand.area < loops[positives[best]].area) best = static_cast<int>(pi);
    }
    if (best < 0)
      throw InternalConsistencyError("found no face containing a floating component");
    holes_of[best].push_back(hl);
  }

  // Faces in deterministic order: by combined centroid (y, then x).
  struct Face {
    int pos_loop;
    std::vector<int> holes;
    double area;
    Point2 centroid;
  };
  std::vector<Face> faces;
  for (std::size_t pi = 0; pi < positives.size(); ++pi) {
    Face f;
    f.pos_loop = positives[pi];
    f.holes = holes_of[pi];
    f.area = loops[f.pos_loop].area;
    double cx = loops[f.pos_loop].area * loops[f.pos_loop].centroid.x;
    double cy = loops[f.pos_loop].area * loops[f.pos_loop].centroid.y;
    for (int hl : f.holes) {
      f.area += loops[hl].area;  // hole areas are negative
      cx += loops[hl].area * loops[hl].centroid.x;
      cy += loops[hl].area * loops[hl].centroid.y;
    }
    f.centroid = f.area != 0.0 ? Point2{cx / f.area, cy / f.area} : loops[f.pos_loop].centroid;
    faces.push_back(std::move(f));
  }
  std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
    if (a.centroid.y != b.centroid.y) return a.centroid.y < b.centroid.y;
    return a.centroid.x < b.centroid.x;
  });

  // Accounting: every half-edge traced once (guaranteed above) and the Euler
  // relation V - E + F = 1 + number of components, with the outer face
  // included in F.
  int euler = np - ns + static_cast<int>(faces.size()) + 1;
  int comps = arr.component_count();
  if (euler != 1 + comps) {
    std::ostringstream os;
    os << "Euler check failed: V=" << np << " E=" << ns << " F=" << faces.size() + 1
       << " components=" << comps;
    throw InternalConsistencyError(os.str());
  }

  auto loop_edges = [&](const Loop& lp) {
    std::vector<CycleEdge> edges;
    edges.reserve(lp.hes.size());
    for (int he : lp.hes) edges.push_back({he / 2, he % 2 == 0});
    return edges;
  };

  // A curve may bound a face along one contiguous stretch only; two separate
  // runs on the same loop violate the cycle contract.
  auto check_runs = [&](const Loop& lp) {
    std::vector<CurveId> ids;
    for (int he : lp.hes) ids.push_back(arr.segments[he / 2].curve);
    std::size_t n = ids.size();
    std::map<CurveId, int> runs;
    for (std::size_t i = 0; i < n; ++i) {
      if (ids[i] != ids[(i + n - 1) % n]) ++runs[ids[i]];  // run starts here
    }
    if (runs.empty()) runs[ids[0]] = 1;  // single-curve loop
    for (const auto& [id, count] : runs) {
      if (count > 1)
        throw AssumptionViolation(AssumptionKind::CurveRepeatsInCycle, {id},
                                  "curve bounds one region along two separate stretches");
    }
  };

  arr.segment_faces_.assign(ns, {-2, -2});
  std::vector<int> face_of_loop(nl, -1);
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    face_of_loop[faces[fi].pos_loop] = static_cast<int>(fi);
    for (int hl : faces[fi].holes) face_of_loop[hl] = static_cast<int>(fi);
  }
  face_of_loop[outer] = -1;

  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const Face& f = faces[fi];
    MinimalCycle mc;
    mc.id = static_cast<int>(fi);
    check_runs(loops[f.pos_loop]);
    mc.boundary = loop_edges(loops[f.pos_loop]);
    for (int hl : f.holes) {
      check_runs(loops[hl]);
      mc.holes.push_back(loop_edges(loops[hl]));
    }
    std::vector<CurveId> cover;
    for (const auto& e : mc.boundary) cover.push_back(arr.segments[e.segment].curve);
    for (const auto& hole : mc.holes)
      for (const auto& e : hole) cover.push_back(arr.segments[e.segment].curve);
    std::sort(cover.begin(), cover.end());
    cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
    mc.cover = std::move(cover);
    mc.area = f.area;
    mc.centroid = f.centroid;
    arr.cycles.push_back(std::move(mc));
  }

  for (int s = 0; s < ns; ++s)
    arr.segment_faces_[s] = {face_of_loop[loop_of[2 * s]], face_of_loop[loop_of[2 * s + 1]]};

  return arr;
}

Arrangement arrange_with_cycles(const LaneGraph& g, const Config& cfg) {
  return extract_minimal_cycles(compute_arrangement(g, cfg), cfg);
}

std::vector<Token> intersection_order_tokens(const Arrangement& arr, CurveId c) {
  const CurveOrder& ord = arr.order_of(c);
  std::vector<Token> out;
  out.reserve(ord.points.size());
  for (int pid : ord.points) {
    Token tok;
    for (const auto& [id, t] : arr.points[pid].incident)
      if (id != c) tok.push_back(id);
    std::sort(tok.begin(), tok.end());
    out.push_back(std::move(tok));
  }
  return out;
}

}  // namespace lanetopo
