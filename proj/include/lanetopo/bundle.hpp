#pragma once

#include <array>
#include <vector>

#include "lanetopo/arrangement.hpp"
#include "lanetopo/lanegraph.hpp"
#include "lanetopo/matching.hpp"

namespace lanetopo {

/// Raw network-style scene prediction: N curve candidates (6 control
/// coordinates each, normalized units), per-candidate existence
/// probabilities, an NxN soft connectivity matrix, and M cycle proposals
/// (soft membership over the N candidates plus k border curves, existence
/// probability, center estimate).
struct PredictionBundle {
  std::vector<std::array<double, 6>> curves;
  std::vector<double> curve_prob;
  std::vector<std::vector<double>> connectivity;
  std::vector<std::vector<double>> cycle_member;
  std::vector<double> cycle_prob;
  std::vector<Point2> cycle_center;

  int n_curves() const { return static_cast<int>(curves.size()); }
  int n_cycles() const { return static_cast<int>(cycle_member.size()); }

  /// Dimension and range checks (probabilities in [0,1], membership rows of
  /// width n_curves + k). Throws SchemaError.
  void check(int k_border) const;
};

/// Ground-truth targets in the same tensor layout, derived from a lane graph
/// and its extracted cycles: N' lanes in graph order, M' cycle cover rows
/// over lanes-then-borders, cycle centroids.
struct GroundTruthBundle {
  std::vector<std::array<double, 6>> curves;
  BoolMatrix incidence;     // N' x N', lane order
  BoolMatrix cycle_covers;  // M' x (N' + k)
  std::vector<Point2> cycle_centers;

  int n_curves() const { return static_cast<int>(curves.size()); }
  int n_cycles() const { return cycle_covers.rows; }
  int k_border() const { return cycle_covers.cols - n_curves(); }
};

GroundTruthBundle ground_truth_bundle(const LaneGraph& g, const Arrangement& with_cycles);

/// Interprets a prediction as a lane graph: candidates with probability >=
/// threshold become lanes (curve id = candidate index), connectivity >= 0.5
/// between kept candidates becomes incidence, border curves are appended,
/// and connected endpoints are snapped together. Degenerate kept candidates
/// (zero-length control polygon) throw ParameterError.
LaneGraph prediction_graph(const PredictionBundle& pred, const FovSpec& fov, double threshold);

}  // namespace lanetopo
