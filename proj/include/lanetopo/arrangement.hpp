#pragma once

#include <utility>
#include <vector>

#include "lanetopo/config.hpp"
#include "lanetopo/lanegraph.hpp"

namespace lanetopo {

/// One merged intersection point of the arrangement. `incident` holds
/// (curve id, curve parameter) pairs sorted by curve id; a curve appears at
/// most once per point.
struct IntersectionPoint {
  int id = 0;
  Point2 pos;
  std::vector<std::pair<CurveId, double>> incident;

  bool touches(CurveId c) const;
  double param_of(CurveId c) const;  // ParameterError when not incident
};

/// Intersection points met along one curve, ordered by curve parameter
/// (strictly increasing). This is the curve's intersection order I_c.
struct CurveOrder {
  CurveId curve = 0;
  std::vector<int> points;   // point ids
  std::vector<double> params;
};

/// Piece of a curve between two consecutive intersection points.
struct Segment {
  int id = 0;
  CurveId curve = 0;
  int from_point = 0;  // at t_lo
  int to_point = 0;    // at t_hi
  double t_lo = 0.0;
  double t_hi = 1.0;
};

struct CycleEdge {
  int segment = 0;
  bool forward = true;  // true: traversed from from_point to to_point
};

/// One minimal cycle (an interior face). `boundary` walks the outer loop
/// counterclockwise; `holes` (clockwise loops) only appear when a separate
/// component of the graph floats inside the face. `cover` lists the distinct
/// curves appearing on any loop, sorted by id.
struct MinimalCycle {
  int id = 0;
  std::vector<CycleEdge> boundary;
  std::vector<std::vector<CycleEdge>> holes;
  std::vector<CurveId> cover;
  double area = 0.0;  // loop area minus hole areas
  Point2 centroid;    // area centroid of the same region
};

/// Planar arrangement of a validated lane graph: merged intersection
/// points, per-curve orders, curve segments, and (after
/// extract_minimal_cycles) the interior faces. Faces are sorted by centroid
/// (y, then x) and ids follow that order.
class Arrangement {
 public:
  FovSpec fov;
  std::vector<LaneCurve> curves;  // copy of the source graph's curves
  std::vector<IntersectionPoint> points;
  std::vector<CurveOrder> orders;  // aligned with `curves`
  std::vector<Segment> segments;
  std::vector<MinimalCycle> cycles;  // empty until extract_minimal_cycles

  const CurveOrder& order_of(CurveId c) const;    // ParameterError
  const LaneCurve& curve(CurveId c) const;        // ParameterError
  std::vector<Point2> segment_polyline(int segment, bool forward, int samples) const;

  /// Faces on either side of a segment as cycle ids, -1 for the outer face.
  /// Only meaningful once cycles are extracted.
  std::pair<int, int> cycles_of_segment(int segment) const;

  int component_count() const;  // connected components of the segment graph

 private:
  friend Arrangement extract_minimal_cycles(const Arrangement& arr, const Config& cfg);
  std::vector<std::pair<int, int>> segment_faces_;  // (forward face, backward face)
};

/// Intersects all curve pairs, merges contact points within the merge
/// radius, and cuts curves into segments. Assumption violations discovered
/// here (they should have been caught by validate_graph) are thrown.
Arrangement compute_arrangement(const LaneGraph& g, const Config& cfg = {});

/// Traces the faces of the arrangement and returns a copy with `cycles`
/// populated. Throws AssumptionViolation (CurveRepeatsInCycle) when a curve
/// bounds one face along two separate stretches, and InternalConsistencyError
/// when the face structure fails its own accounting (Euler check, unvisited
/// edges).
Arrangement extract_minimal_cycles(const Arrangement& arr, const Config& cfg = {});

/// compute_arrangement + extract_minimal_cycles.
Arrangement arrange_with_cycles(const LaneGraph& g, const Config& cfg = {});

/// Sorted ids of the *other* curves present at one intersection point; the
/// unit of comparison for intersection orders.
using Token = std::vector<CurveId>;

/// Token sequence of curve c along its direction of travel.
std::vector<Token> intersection_order_tokens(const Arrangement& arr, CurveId c);

}  // namespace lanetopo
