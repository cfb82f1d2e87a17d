#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lanetopo/config.hpp"
#include "lanetopo/errors.hpp"
#include "lanetopo/geometry.hpp"

namespace lanetopo {

/// Metric extents of the field of view; x is lateral, z is forward distance.
/// Normalized coordinates map x -> [0,1] and z -> [0,1].
struct FovSpec {
  double x_min = -25.0;
  double x_max = 25.0;
  double z_min = 1.0;
  double z_max = 50.0;
  double resolution = 0.25;  // meters per cell, kept for rasterizing consumers
};

Point2 world_to_normalized(const FovSpec& fov, Point2 world);
Point2 normalized_to_world(const FovSpec& fov, Point2 normalized);

enum class CurveRole { Lane, Boundary };

struct LaneCurve {
  CurveId id;
  CurveRole role;
  QuadBezier bezier;
};

/// The four border curves of the normalized field of view, ordered bottom,
/// right, top, left (counterclockwise), with ids first_id .. first_id + 3.
std::vector<LaneCurve> fov_boundary_curves(CurveId first_id);

/// Lane centerline graph over the normalized field of view. Curves keep
/// their given order; ids are arbitrary but unique. Incidence pairs (x, y)
/// mean traffic may continue from the end of lane x onto the start of
/// lane y. Structural problems (duplicate ids, incidence naming missing or
/// boundary curves, self incidence) throw ParameterError; geometric contract
/// checks live in validate_graph.
class LaneGraph {
 public:
  LaneGraph(FovSpec fov, std::vector<LaneCurve> curves,
            std::vector<std::pair<CurveId, CurveId>> incidence);

  const FovSpec& fov() const { return fov_; }
  const std::vector<LaneCurve>& curves() const { return curves_; }
  const std::vector<std::pair<CurveId, CurveId>>& incidence() const { return incidence_; }

  bool has_curve(CurveId id) const;
  const LaneCurve& curve(CurveId id) const;  // ParameterError on unknown id
  std::vector<CurveId> lane_ids() const;     // in curve order
  std::vector<CurveId> boundary_ids() const;
  int lane_count() const;
  bool connected(CurveId from, CurveId to) const;

 private:
  FovSpec fov_;
  std::vector<LaneCurve> curves_;
  std::vector<std::pair<CurveId, CurveId>> incidence_;  // sorted
};

enum class ViolationKind {
  MultipleIntersections,  // assumption 1
  SelfIntersection,       // assumption 2
  FloatingCurve,          // assumption 3
  IncidenceGap,           // connected endpoints further apart than endpoint_tol
  OutOfBounds,            // curve leaves the normalized field of view
  BadBoundary,            // border curves do not form the unit square
};

std::string to_string(ViolationKind kind);

/// Maps the assumption-backed kinds to their contract number, 0 otherwise.
int assumption_id(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::vector<CurveId> curves;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every geometric contract: assumptions 1-3, incidence coincidence,
/// curves inside the field of view, border curves forming the unit square.
/// Violations are collected, not thrown.
ValidationReport validate_graph(const LaneGraph& g, const Config& cfg = {});

/// Snaps every group of connected endpoints to a single shared position (the
/// componentwise midrange of the group). Connected pairs land on their
/// midpoint; already coincident groups are left bit-exact. Idempotent.
LaneGraph merge_connected(const LaneGraph& g);

}  // namespace lanetopo
