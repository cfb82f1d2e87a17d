#include "lanetopo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "lanetopo/errors.hpp"

namespace lanetopo {

double norm(Point2 p) { return std::hypot(p.x, p.y); }
double dist(Point2 a, Point2 b) { return norm(a - b); }

QuadBezier::QuadBezier(Point2 a, Point2 b, Point2 c) : p0(a), p1(b), p2(c) {
  if (dist(a, b) + dist(b, c) <= 0.0)
    throw ParameterError("degenerate curve: control points all coincide");
}

bool operator==(const QuadBezier& a, const QuadBezier& b) {
  return a.p0 == b.p0 && a.p1 == b.p1 && a.p2 == b.p2;
}

static void check_param(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    std::ostringstream os;
    os << "curve parameter " << t << " outside [0,1]";
    throw ParameterError(os.str());
  }
}

Point2 eval_bezier(const QuadBezier& c, double t) {
  check_param(t);
  double u = 1.0 - t;
  return (u * u) * c.p0 + (2.0 * u * t) * c.p1 + (t * t) * c.p2;
}

Point2 bezier_derivative(const QuadBezier& c, double t) {
  check_param(t);
  return 2.0 * ((1.0 - t) * (c.p1 - c.p0) + t * (c.p2 - c.p1));
}

std::vector<Point2> sample_polyline(const QuadBezier& c, int n) {
  if (n < 2) throw ParameterError("polyline needs at least 2 samples");
  std::vector<Point2> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    double t = i == n - 1 ? 1.0 : static_cast<double>(i) / (n - 1);
    out.push_back(eval_bezier(c, t));
  }
  return out;
}

std::pair<QuadBezier, QuadBezier> split_bezier(const QuadBezier& c, double t) {
  if (!(t > 0.0 && t < 1.0)) throw ParameterError("split parameter must be interior");
  Point2 q0 = c.p0 + t * (c.p1 - c.p0);
  Point2 q1 = c.p1 + t * (c.p2 - c.p1);
  Point2 m = q0 + t * (q1 - q0);
  return {QuadBezier(c.p0, q0, m), QuadBezier(m, q1, c.p2)};
}

std::array<double, 6> control_array(const QuadBezier& c) {
  return {c.p0.x, c.p0.y, c.p1.x, c.p1.y, c.p2.x, c.p2.y};
}

// ---------------------------------------------------------------------------
// Curve intersection.
//
// Recursive bounding-box subdivision down to boxes a fraction of geom_tol,
// followed by a Newton polish of the surviving contact. Candidates are
// deduplicated into parameter bins and then chained into contact clusters;
// two separate clusters, or candidates spread over more than a point-sized
// region, mean the pair breaks the single-intersection contract.
// ---------------------------------------------------------------------------

namespace {

constexpr double kBin = 1e-3;            // candidate dedupe bin (curve parameter)
constexpr double kChainParam = 2.5e-3;   // parameter gap still bridged within one contact
constexpr double kOverlapExtent = 0.01;  // position spread beyond a point contact

struct Piece {
  Point2 a, b, c;  // control points of the sub-curve
  double t0, t1;   // parameter range on the original curve
};

struct Box {
  double xlo, ylo, xhi, yhi;
};

Box bbox(const Piece& p) {
  return {std::min({p.a.x, p.b.x, p.c.x}), std::min({p.a.y, p.b.y, p.c.y}),
          std::max({p.a.x, p.b.x, p.c.x}), std::max({p.a.y, p.b.y, p.c.y})};
}

bool apart(const Box& x, const Box& y, double pad) {
  return x.xhi + pad < y.xlo || y.xhi + pad < x.xlo || x.yhi + pad < y.ylo || y.yhi + pad < x.ylo;
}

double box_size(const Box& b) { return (b.xhi - b.xlo) + (b.yhi - b.ylo); }

std::pair<Piece, Piece> halves(const Piece& p) {
  Point2 q0 = 0.5 * (p.a + p.b);
  Point2 q1 = 0.5 * (p.b + p.c);
  Point2 m = 0.5 * (q0 + q1);
  double tm = 0.5 * (p.t0 + p.t1);
  return {Piece{p.a, q0, m, p.t0, tm}, Piece{m, q1, p.c, tm, p.t1}};
}

struct Candidate {
  double ta = 0.0, tb = 0.0;
  Point2 pos;
  double residual = 0.0;
  bool endpoint = false;  // endpoint-on-endpoint contact, parameters exact
};

bool better(const Candidate& x, const Candidate& y) {
  if (x.endpoint != y.endpoint) return x.endpoint;
  return x.residual < y.residual;
}

}  // namespace

std::optional<IntersectionHit> intersect_curves(const QuadBezier& a, const QuadBezier& b,
                                                double geom_tol) {
  if (!(geom_tol > 0.0) || !std::isfinite(geom_tol))
    throw ParameterError("geom_tol must be positive and finite");
  const double merge_r = kMergeFactor * geom_tol;

  std::unordered_map<std::uint64_t, Candidate> bins;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;

  auto note = [&](const Candidate& cand) {
    if (bins.empty()) {
      xmin = xmax = cand.pos.x;
      ymin = ymax = cand.pos.y;
    } else {
      xmin = std::min(xmin, cand.pos.x);
      xmax = std::max(xmax, cand.pos.x);
      ymin = std::min(ymin, cand.pos.y);
      ymax = std::max(ymax, cand.pos.y);
    }
    if (xmax - xmin > kOverlapExtent || ymax - ymin > kOverlapExtent)
      throw AssumptionViolation(AssumptionKind::MultipleIntersections, {},
                                "contact positions spread over more than a point");
    std::uint64_t key = (static_cast<std::uint64_t>(cand.ta / kBin) << 32) |
                        static_cast<std::uint64_t>(cand.tb / kBin);
    auto [it, inserted] = bins.try_emplace(key, cand);
    if (!inserted && better(cand, it->second)) it->second = cand;
    if (bins.size() > 100000)
      throw InternalConsistencyError("intersection candidate bins exploded");
  };

  // Endpoint-on-endpoint contacts, recorded with exact parameter extremes.
  const Point2 ea[2] = {a.p0, a.p2};
  const Point2 eb[2] = {b.p0, b.p2};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double d = dist(ea[i], eb[j]);
      if (d <= geom_tol)
        note(Candidate{static_cast<double>(i), static_cast<double>(j),
                       0.5 * (ea[i] + eb[j]), d, true});
    }
  }

  // Box subdivision of the pair.
  const double leaf = std::max(0.2 * geom_tol, 1e-12);
  std::vector<std::pair<Piece, Piece>> stack;
  stack.push_back({Piece{a.p0, a.p1, a.p2, 0.0, 1.0}, Piece{b.p0, b.p1, b.p2, 0.0, 1.0}});
  long steps = 0;
  while (!stack.empty()) {
    auto [pa, pb] = stack.back();
    stack.pop_back();
    if (++steps > 20000000)
      throw InternalConsistencyError("intersection subdivision exploded");
    Box ba = bbox(pa), bb = bbox(pb);
    if (apart(ba, bb, geom_tol)) continue;
    double sa = box_size(ba), sb = box_size(bb);
    if (sa <= leaf && sb <= leaf) {
      Candidate cand;
      cand.ta = 0.5 * (pa.t0 + pa.t1);
      cand.tb = 0.5 * (pb.t0 + pb.t1);
      Point2 qa = eval_bezier(a, cand.ta);
      Point2 qb = eval_bezier(b, cand.tb);
      cand.pos = 0.5 * (qa + qb);
      cand.residual = dist(qa, qb);
      note(cand);
      continue;
    }
    if (sa >= sb) {
      auto [l, r] = halves(pa);
      stack.push_back({r, pb});
      stack.push_back({l, pb});
    } else {
      auto [l, r] = halves(pb);
      stack.push_back({pa, r});
      stack.push_back({pa, l});
    }
  }

  if (bins.empty()) return std::nullopt;

  std::vector<Candidate> cands;
  cands.reserve(bins.size());
  for (auto& [key, c] : bins) cands.push_back(c);
  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    return x.ta != y.ta ? x.ta < y.ta : x.tb < y.tb;
  });

  // Chain candidates into contact clusters (union-find).
  int n = static_cast<int>(cands.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bool near_param = std::abs(cands[i].ta - cands[j].ta) <= kChainParam &&
                        std::abs(cands[i].tb - cands[j].tb) <= kChainParam;
      bool near_pos = dist(cands[i].pos, cands[j].pos) <= merge_r;
      if (near_param || near_pos) parent[find(i)] = find(j);
    }
  }

  std::vector<int> roots;
  std::vector<int> rep_of_root(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (rep_of_root[r] < 0) {
      roots.push_back(r);
      rep_of_root[r] = i;
    } else if (better(cands[i], cands[rep_of_root[r]])) {
      rep_of_root[r] = i;
    }
  }
  if (roots.size() >= 2) {
    std::ostringstream os;
    os << roots.size() << " distinct contacts, first two near (";
    const Candidate& c0 = cands[rep_of_root[roots[0]]];
    const Candidate& c1 = cands[rep_of_root[roots[1]]];
    os << c0.pos.x << ", " << c0.pos.y << ") and (" << c1.pos.x << ", " << c1.pos.y << ")";
    throw AssumptionViolation(AssumptionKind::MultipleIntersections, {}, os.str());
  }

  Candidate rep = cands[rep_of_root[roots[0]]];
  if (!rep.endpoint) {
    // Newton polish on F(ta, tb) = a(ta) - b(tb); keep the best residual seen.
    double ta = rep.ta, tb = rep.tb;
    double best_ta = ta, best_tb = tb, best_res = rep.residual;
    for (int iter = 0; iter < 15; ++iter) {
      Point2 f = eval_bezier(a, ta) - eval_bezier(b, tb);
      double res = norm(f);
      if (res < best_res) {
        best_res = res;
        best_ta = ta;
        best_tb = tb;
      }
      if (res < 1e-15) break;
      Point2 da = bezier_derivative(a, ta);
      Point2 db = bezier_derivative(b, tb);
      double det = -da.x * db.y + da.y * db.x;  // det [da | -db]
      if (std::abs(det) < 1e-18) break;
      double dta = (-f.x * -db.y - -db.x * -f.y) / det;
      double dtb = (da.x * -f.y - -f.x * da.y) / det;
      ta = std::clamp(ta + dta, 0.0, 1.0);
      tb = std::clamp(tb + dtb, 0.0, 1.0);
    }
    rep.ta = best_ta;
    rep.tb = best_tb;
    Point2 qa = eval_bezier(a, rep.ta);
    Point2 qb = eval_bezier(b, rep.tb);
    rep.pos = 0.5 * (qa + qb);
    rep.residual = best_res;
  }

  return IntersectionHit{rep.ta, rep.tb, rep.pos};
}

}  // namespace lanetopo
