#pragma once

#include "lanetopo/bundle.hpp"

namespace lanetopo {

/// Term weights of the training loss; all must be finite and >= 0.
struct LossWeights {
  double alpha = 1.0;   // scales the whole cycle block
  double beta_e = 1.0;  // curve existence
  double beta_c = 1.0;  // connectivity
  double beta_d = 1.0;  // cycle existence
  double beta_f = 1.0;  // cycle centers
};

struct LossBreakdown {
  double l_splines = 0.0;
  double l_exists_curve = 0.0;
  double l_connect = 0.0;
  double l_member = 0.0;
  double l_exists_cycle = 0.0;
  double l_center = 0.0;
  double total = 0.0;
};

/// Matching-based scene loss:
///   total = l_splines + beta_e * l_exists_curve + beta_c * l_connect
///         + alpha * (l_member + beta_d * l_exists_cycle + beta_f * l_center)
/// Curves pair one-to-one by minimum-cost assignment on L1 control-point
/// distance; cycle proposals pair with ground-truth cycles by minimum
/// disagreement of their 0.5-binarized membership rows. Every term is a mean
/// over its own support: matched curve coordinates, all curve logits, the
/// matched-curve connectivity block, matched-cycle membership rows, all
/// cycle logits, matched-cycle centers. Empty supports contribute 0.
LossBreakdown total_loss(const PredictionBundle& pred, const GroundTruthBundle& gt,
                         const LossWeights& w = {});

}  // namespace lanetopo
