#pragma once

namespace lanetopo {

// All geometry lives in the normalized field of view [0,1] x [0,1]; the
// defaults below are expressed in those units.
inline constexpr double kGeomTol = 1e-7;        // geometric coincidence
inline constexpr double kParamTol = 1e-9;       // curve-parameter coincidence
inline constexpr double kMergeFactor = 10.0;    // point merge radius = factor * geom_tol
inline constexpr double kEndpointTol = 1e-4;    // connection / on-border slack
inline constexpr int kSegmentSamples = 100;     // polyline samples per arrangement segment
inline constexpr double kExistThreshold = 0.5;  // probability gate for predicted entities
inline constexpr double kTauDetect = 0.05;      // detection cost cutoff (L1 over control points)
inline constexpr double kPartitionTol = 1e-3;   // allowed defect in sum(cycle areas) == fov area

struct Config {
  double geom_tol = kGeomTol;
  double param_tol = kParamTol;
  double endpoint_tol = kEndpointTol;
  int segment_samples = kSegmentSamples;
  int jobs = 1;  // worker threads for pairwise intersection sweeps

  double merge_radius() const { return kMergeFactor * geom_tol; }
};

}  // namespace lanetopo
