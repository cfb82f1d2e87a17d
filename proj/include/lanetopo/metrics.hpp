#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lanetopo/arrangement.hpp"
#include "lanetopo/bundle.hpp"
#include "lanetopo/config.hpp"

namespace lanetopo {

struct MetricConfig {
  double threshold = kExistThreshold;  // existence gate for predicted entities
  double tau_detect = kTauDetect;      // L1 cutoff for the detection ratio
  Config geo;
};

/// A lane graph plus its cycle arrangement; `arr` is empty when the graph
/// could not be arranged (assumption violations), with the reason kept.
struct GraphEval {
  LaneGraph graph;
  std::optional<Arrangement> arr;
  std::string failure;
};

GraphEval evaluate_graph(const LaneGraph& g, const Config& cfg = {});

/// All scene scores. F-scores are percentages in [0, 100]; i_order is a mean
/// normalized edit distance in [0, 2]. `est_failed` marks predictions whose
/// graph violated the contract: cycle scores then fall back to their
/// no-proposal values and i_order to the unmatched distance.
struct SceneMetrics {
  double mc_f = 0.0;      // minimal-cycle agreement, reconstructed est cycles
  double h_gt_f = 0.0;    // cycle head rows vs ground-truth cycles
  double h_est_f = 0.0;   // cycle head rows vs cycles of the est graph
  double i_order = 2.0;   // intersection-order edit distance
  double detect = 0.0;    // share of ground-truth lanes detected (percent)
  double c_f = 0.0;       // connectivity F-score
  bool est_failed = false;
  std::string est_failure;
};

/// Scores between two explicit lane graphs (mc_f, i_order, detect, c_f; the
/// head scores need a prediction bundle and stay at their defaults).
SceneMetrics evaluate_graph_pair(const LaneGraph& gt, const LaneGraph& est,
                                 const MetricConfig& mc = {});

/// Full scoring of a prediction bundle against a ground-truth graph.
SceneMetrics evaluate_scene(const LaneGraph& gt, const PredictionBundle& pred,
                            const MetricConfig& mc = {});

// Individual scores over prepared inputs; evaluate_* wrap these.
double mc_f_score(const GraphEval& gt, const GraphEval& est, const MetricConfig& mc = {});
double i_order_score(const GraphEval& gt, const GraphEval& est, const MetricConfig& mc = {});
double detect_ratio(const LaneGraph& gt, const LaneGraph& est, const MetricConfig& mc = {});
double connectivity_f(const LaneGraph& gt, const LaneGraph& est, const MetricConfig& mc = {});
double h_gt_f_score(const GraphEval& gt, const PredictionBundle& pred, const MetricConfig& mc = {});
double h_est_f_score(const GraphEval& est, const PredictionBundle& pred, const MetricConfig& mc = {});

/// Unit-cost edit distance between two token sequences.
int token_edit_distance(const std::vector<Token>& a, const std::vector<Token>& b);

}  // namespace lanetopo
