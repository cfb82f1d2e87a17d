#include "lanetopo/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "lanetopo/matching.hpp"

namespace lanetopo {

GraphEval evaluate_graph(const LaneGraph& g, const Config& cfg) {
  GraphEval ge{g, std::nullopt, {}};
  auto report = validate_graph(g, cfg);
  if (!report.ok()) {
    std::ostringstream os;
    os << report.violations.size() << " contract violation(s), first: "
       << to_string(report.violations[0].kind);
    if (!report.violations[0].detail.empty()) os << " (" << report.violations[0].detail << ")";
    ge.failure = os.str();
    return ge;
  }
  try {
    ge.arr = arrange_with_cycles(g, cfg);
  } catch (const Error& e) {
    ge.failure = e.what();
  }
  return ge;
}

namespace {

std::vector<QuadBezier> lane_beziers(const LaneGraph& g) {
  std::vector<QuadBezier> out;
  for (const auto& c : g.curves())
    if (c.role == CurveRole::Lane) out.push_back(c.bezier);
  return out;
}

const Arrangement& require_gt(const GraphEval& gt) {
  if (!gt.arr)
    throw ParameterError("ground-truth graph failed to arrange: " + gt.failure);
  return *gt.arr;
}

/// est graph lane index -> gt lane index by minimum L1 control distance.
Assignment graph_min_match(const LaneGraph& gt, const LaneGraph& est) {
  return min_match(lane_beziers(est), lane_beziers(gt));
}

}  // namespace

double mc_f_score(const GraphEval& gt, const GraphEval& est, const MetricConfig&) {
  const Arrangement& gt_arr = require_gt(gt);
  int n_gt = gt.graph.lane_count();
  int n_est = est.graph.lane_count();
  if (n_gt == 0 && n_est == 0 && est.arr) return 100.0;
  if (n_est == 0 || !est.arr) return 0.0;  // nothing proposed: every cycle missed

  BoolMatrix gt_covers = ground_truth_bundle(gt.graph, gt_arr).cycle_covers;
  BoolMatrix est_covers = ground_truth_bundle(est.graph, *est.arr).cycle_covers;
  Assignment assign = graph_min_match(gt.graph, est.graph);
  return match_cycles(gt_covers, est_covers, assign.to_gt, n_gt,
                      static_cast<int>(gt.graph.boundary_ids().size()))
      .f_score();
}

int token_edit_distance(const std::vector<Token>& a, const std::vector<Token>& b) {
  std::size_t na = a.size(), nb = b.size();
  std::vector<int> prev(nb + 1), cur(nb + 1);
  for (std::size_t j = 0; j <= nb; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= na; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= nb; ++j) {
      int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[nb];
}

double i_order_score(const GraphEval& gt, const GraphEval& est, const MetricConfig&) {
  const Arrangement& gt_arr = require_gt(gt);
  auto gt_lanes = gt.graph.lane_ids();
  int n_gt = static_cast<int>(gt_lanes.size());
  if (n_gt == 0) return 0.0;
  const double kUnmatched = 2.0;
  if (!est.arr || est.graph.lane_count() == 0) return kUnmatched;

  auto est_lanes = est.graph.lane_ids();
  auto gt_borders = gt.graph.boundary_ids();
  auto est_borders = est.graph.boundary_ids();
  auto cost = curve_l1_cost(lane_beziers(est.graph), lane_beziers(gt.graph));
  Assignment assign = min_match(cost, n_gt);

  // Curve ids of the estimate mapped into ground-truth ids: lanes through
  // the assignment, borders by rank.
  std::map<CurveId, CurveId> to_gt_id;
  for (std::size_t i = 0; i < est_lanes.size(); ++i)
    to_gt_id[est_lanes[i]] = gt_lanes[assign.to_gt[i]];
  for (std::size_t b = 0; b < est_borders.size() && b < gt_borders.size(); ++b)
    to_gt_id[est_borders[b]] = gt_borders[b];
  auto mapped_tokens = [&](CurveId est_lane) {
    auto toks = intersection_order_tokens(*est.arr, est_lane);
    for (auto& tok : toks) {
      for (auto& id : tok) {
        auto it = to_gt_id.find(id);
        if (it == to_gt_id.end()) throw InternalConsistencyError("unmapped curve in token");
        id = it->second;
      }
      std::sort(tok.begin(), tok.end());
    }
    return toks;
  };

  double total = 0.0;
  for (int n = 0; n < n_gt; ++n) {
    const auto& cands = assign.to_est[n];
    if (cands.empty()) {
      total += kUnmatched;
      continue;
    }
    int best = cands[0];
    for (int s : cands)
      if (cost[s][n] < cost[best][n]) best = s;
    auto gt_toks = intersection_order_tokens(gt_arr, gt_lanes[n]);
    auto est_toks = mapped_tokens(est_lanes[best]);
    double len = static_cast<double>(std::max<std::size_t>(gt_toks.size(), 1));
    total += token_edit_distance(est_toks, gt_toks) / len;
  }
  return total / n_gt;
}

double detect_ratio(const LaneGraph& gt, const LaneGraph& est, const MetricConfig& mc) {
  auto gt_b = lane_beziers(gt);
  auto est_b = lane_beziers(est);
  int n_gt = static_cast<int>(gt_b.size());
  if (n_gt == 0) return 100.0;
  if (est_b.empty()) return 0.0;
  auto cost = curve_l1_cost(est_b, gt_b);
  Assignment assign = min_match(cost, n_gt);
  int found = 0;
  for (int n = 0; n < n_gt; ++n) {
    for (int s : assign.to_est[n]) {
      if (cost[s][n] < mc.tau_detect) {
        ++found;
        break;
      }
    }
  }
  return 100.0 * found / n_gt;
}

double connectivity_f(const LaneGraph& gt, const LaneGraph& est, const MetricConfig&) {
  auto gt_lanes = gt.lane_ids();
  auto est_lanes = est.lane_ids();
  std::set<std::pair<CurveId, CurveId>> gt_pairs(gt.incidence().begin(), gt.incidence().end());

  std::set<std::pair<CurveId, CurveId>> est_pairs;
  if (!est_lanes.empty() && !gt_lanes.empty()) {
    Assignment assign = graph_min_match(gt, est);
    std::map<CurveId, CurveId> to_gt_id;
    for (std::size_t i = 0; i < est_lanes.size(); ++i)
      to_gt_id[est_lanes[i]] = gt_lanes[assign.to_gt[i]];
    for (const auto& [from, to] : est.incidence()) {
      CurveId mf = to_gt_id.at(from), mt = to_gt_id.at(to);
      if (mf != mt) est_pairs.emplace(mf, mt);
    }
  }

  long tp = 0, fp = 0, fn = 0;
  for (const auto& p : est_pairs) (gt_pairs.count(p) ? tp : fp) += 1;
  for (const auto& p : gt_pairs) fn += est_pairs.count(p) ? 0 : 1;
  long denom = 2 * tp + fp + fn;
  if (denom == 0) return 100.0;
  return 100.0 * 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

namespace {

/// Min-match of raw gated candidates onto ground-truth lanes; ungated
/// candidates map to -1.
std::vector<int> gated_candidate_match(const GraphEval& gt, const PredictionBundle& pred,
                                       double threshold) {
  std::vector<int> est_to_gt(pred.n_curves(), -1);
  std::vector<std::array<double, 6>> gt_arrays;
  for (const auto& c : gt.graph.curves())
    if (c.role == CurveRole::Lane) gt_arrays.push_back(control_array(c.bezier));
  if (gt_arrays.empty()) return est_to_gt;
  for (int i = 0; i < pred.n_curves(); ++i) {
    if (pred.curve_prob[i] < threshold) continue;
    int best = 0;
    double best_d = l1_control_distance(pred.curves[i], gt_arrays[0]);
    for (std::size_t j = 1; j < gt_arrays.size(); ++j) {
      double d = l1_control_distance(pred.curves[i], gt_arrays[j]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    est_to_gt[i] = best;
  }
  return est_to_gt;
}

BoolMatrix gated_proposals(const PredictionBundle& pred, double threshold) {
  std::vector<int> rows;
  for (int m = 0; m < pred.n_cycles(); ++m)
    if (pred.cycle_prob[m] >= threshold) rows.push_back(m);
  int width = pred.n_cycles() > 0 ? static_cast<int>(pred.cycle_member[0].size())
                                  : pred.n_curves() + 4;
  BoolMatrix out(static_cast<int>(rows.size()), width);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < width; ++c)
      out.at(static_cast<int>(r), c) = pred.cycle_member[rows[r]][c] >= 0.5 ? 1 : 0;
  return out;
}

}  // namespace

double h_gt_f_score(const GraphEval& gt, const PredictionBundle& pred, const MetricConfig& mc) {
  const Arrangement& gt_arr = require_gt(gt);
  pred.check(static_cast<int>(gt.graph.boundary_ids().size()));
  BoolMatrix gt_covers = ground_truth_bundle(gt.graph, gt_arr).cycle_covers;
  BoolMatrix proposals = gated_proposals(pred, mc.threshold);
  std::vector<int> est_to_gt = gated_candidate_match(gt, pred, mc.threshold);
  return match_cycles(gt_covers, proposals, est_to_gt, gt.graph.lane_count(),
                      static_cast<int>(gt.graph.boundary_ids().size()))
      .f_score();
}

double h_est_f_score(const GraphEval& est, const PredictionBundle& pred, const MetricConfig& mc) {
  if (!est.arr) return 0.0;  // no reconstructed cycles to hold the head against
  pred.check(static_cast<int>(est.graph.boundary_ids().size()));
  BoolMatrix est_covers = ground_truth_bundle(est.graph, *est.arr).cycle_covers;
  BoolMatrix proposals = gated_proposals(pred, mc.threshold);
  // The est graph's lanes are exactly the gated candidates, in index order.
  auto est_lanes = est.graph.lane_ids();
  std::vector<int> est_to_gt(pred.n_curves(), -1);
  for (std::size_t r = 0; r < est_lanes.size(); ++r) est_to_gt[est_lanes[r]] = static_cast<int>(r);
  return match_cycles(est_covers, proposals, est_to_gt,
                      static_cast<int>(est_lanes.size()),
                      static_cast<int>(est.graph.boundary_ids().size()))
      .f_score();
}

SceneMetrics evaluate_graph_pair(const LaneGraph& gt, const LaneGraph& est,
                                 const MetricConfig& mc) {
  GraphEval gt_eval = evaluate_graph(gt, mc.geo);
  require_gt(gt_eval);
  GraphEval est_eval = evaluate_graph(est, mc.geo);

  SceneMetrics m;
  m.est_failed = !est_eval.arr.has_value();
  m.est_failure = est_eval.failure;
  m.mc_f = mc_f_score(gt_eval, est_eval, mc);
  m.i_order = i_order_score(gt_eval, est_eval, mc);
  m.detect = detect_ratio(gt, est, mc);
  m.c_f = connectivity_f(gt, est, mc);
  return m;
}

SceneMetrics evaluate_scene(const LaneGraph& gt, const PredictionBundle& pred,
                            const MetricConfig& mc) {
  GraphEval gt_eval = evaluate_graph(gt, mc.geo);
  require_gt(gt_eval);

  SceneMetrics m;
  std::optional<LaneGraph> est;
  try {
    est = prediction_graph(pred, gt.fov(), mc.threshold);
  } catch (const ParameterError& e) {
    m.est_failed = true;
    m.est_failure = e.what();
  }

  m.h_gt_f = h_gt_f_score(gt_eval, pred, mc);
  if (est) {
    GraphEval est_eval = evaluate_graph(*est, mc.geo);
    if (!est_eval.arr) {
      m.est_failed = true;
      m.est_failure = est_eval.failure;
    }
    m.mc_f = mc_f_score(gt_eval, est_eval, mc);
    m.i_order = i_order_score(gt_eval, est_eval, mc);
    m.detect = detect_ratio(gt, *est, mc);
    m.c_f = connectivity_f(gt, *est, mc);
    m.h_est_f = h_est_f_score(est_eval, pred, mc);
  } else {
    bool gt_empty = gt.lane_count() == 0;
    m.mc_f = gt_empty ? 100.0 : 0.0;
    m.i_order = gt_empty ? 0.0 : 2.0;
    m.detect = gt_empty ? 100.0 : 0.0;
    m.c_f = gt.incidence().empty() ? 100.0 : 0.0;
    m.h_est_f = 0.0;
  }
  return m;
}

}  // namespace lanetopo
