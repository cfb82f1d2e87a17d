#pragma once

#include <cstdint>

#include "lanetopo/config.hpp"
#include "lanetopo/lanegraph.hpp"

namespace lanetopo {

/// Regular grid scene: nx vertical lanes at x = i/(nx+1) flowing bottom to
/// top, then ny horizontal lanes at y = j/(ny+1) flowing left to right. Lane
/// ids 0..nx+ny-1, border ids continue after. Spacing below the merge
/// radius throws ParameterError.
LaneGraph gen_grid(int nx, int ny, const FovSpec& fov = {}, const Config& cfg = {});

struct SceneParams {
  std::uint64_t seed = 0;
  int min_lanes = 2;
  int max_lanes = 6;
  double curvature = 0.04;        // max lateral control-point bow, normalized units
  double connect_prob = 0.3;      // chance a lane is split into a connected pair
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Random valid scene: vertical lanes in disjoint x-slabs, horizontal lanes
/// in disjoint y-slabs (so crossings stay transversal and unique), with some
/// lanes split into connected pairs. Deterministic in params.seed. Retries
/// rejected draws a bounded number of times, then throws GenerationError.
LaneGraph gen_random_scene(const SceneParams& params, const Config& cfg = {});

/// Random perturbation of magnitude `mag`: interior control points move
/// freely, junction groups move jointly, endpoints on the border slide along
/// it. Deterministic in seed. The result is revalidated; contract breaks
/// throw DeformationRejected.
LaneGraph deform(const LaneGraph& g, double mag, std::uint64_t seed, const Config& cfg = {});

/// Splits curve c at parameter t into two connected curves with fresh ids
/// (max id + 1 and + 2); incidence in/out of c is rewired. Geometry is
/// preserved exactly, so the drawn scene does not change.
LaneGraph fragment(const LaneGraph& g, CurveId c, double t);

}  // namespace lanetopo
