#include "lanetopo/loss.hpp"

#include <algorithm>
#include <cmath>

#include "lanetopo/matching.hpp"

namespace lanetopo {

namespace {

constexpr double kProbClamp = 1e-7;  // keeps the cross-entropy logs finite

double bce(double p, bool target) {
  p = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
  return target ? -std::log(p) : -std::log(1.0 - p);
}

void check_weights(const LossWeights& w) {
  for (double x : {w.alpha, w.beta_e, w.beta_c, w.beta_d, w.beta_f}) {
    if (!std::isfinite(x) || x < 0.0)
      throw ParameterError("loss weights must be finite and non-negative");
  }
}

}  // namespace

LossBreakdown total_loss(const PredictionBundle& pred, const GroundTruthBundle& gt,
                         const LossWeights& w) {
  check_weights(w);
  int k = gt.k_border();
  if (k < 0) throw ParameterError("ground-truth covers narrower than its curve list");
  pred.check(k);

  int n_est = pred.n_curves();
  int n_gt = gt.n_curves();
  int m_est = pred.n_cycles();
  int m_gt = gt.n_cycles();
  LossBreakdown out;

  // One-to-one curve matching (Hungarian on the L1 control distance) drives
  // the spline, curve-existence, and connectivity terms.
  std::vector<std::vector<double>> cost(n_est, std::vector<double>(n_gt, 0.0));
  for (int i = 0; i < n_est; ++i)
    for (int j = 0; j < n_gt; ++j) cost[i][j] = l1_control_distance(pred.curves[i], gt.curves[j]);
  HungarianResult sigma = (n_est > 0 && n_gt > 0) ? hungarian(cost) : HungarianResult{};

  if (!sigma.pairs.empty()) {
    double acc = 0.0;
    for (const auto& [i, j] : sigma.pairs) acc += cost[i][j];
    out.l_splines = acc / (6.0 * static_cast<double>(sigma.pairs.size()));
  }

  if (n_est > 0) {
    std::vector<char> matched(n_est, 0);
    for (const auto& [i, j] : sigma.pairs) matched[i] = 1;
    double acc = 0.0;
    for (int i = 0; i < n_est; ++i) acc += bce(pred.curve_prob[i], matched[i]);
    out.l_exists_curve = acc / n_est;
  }

  if (!sigma.pairs.empty()) {
    double acc = 0.0;
    for (const auto& [i, gi] : sigma.pairs)
      for (const auto& [j, gj] : sigma.pairs)
        acc += bce(pred.connectivity[i][j], gt.incidence.at(gi, gj) != 0);
    double p = static_cast<double>(sigma.pairs.size());
    out.l_connect = acc / (p * p);
  }

  // Cycle block: nearest-curve assignment R rewrites ground-truth covers
  // into candidate indexing; proposals pair with ground-truth cycles by
  // minimum disagreement of the 0.5-binarized membership rows.
  Assignment r = min_match(cost, n_gt);
  BoolMatrix targets = remap_cycle_targets(gt.cycle_covers, r, n_est, n_gt, k);

  BoolMatrix proposals(m_est, n_est + k);
  for (int m = 0; m < m_est; ++m)
    for (int c = 0; c < n_est + k; ++c) proposals.at(m, c) = pred.cycle_member[m][c] >= 0.5;
  CycleMatchStats cycle_match = match_cycles(gt.cycle_covers, proposals, r.to_gt, n_gt, k);

  if (!cycle_match.pairs.empty()) {
    double acc = 0.0;
    for (const auto& [m, j] : cycle_match.pairs)
      for (int c = 0; c < n_est + k; ++c)
        acc += bce(pred.cycle_member[j][c], targets.at(m, c) != 0);
    out.l_member = acc / (static_cast<double>(cycle_match.pairs.size()) * (n_est + k));
  }

  if (m_est > 0) {
    std::vector<char> matched(m_est, 0);
    for (const auto& [m, j] : cycle_match.pairs) matched[j] = 1;
    double acc = 0.0;
    for (int j = 0; j < m_est; ++j) acc += bce(pred.cycle_prob[j], matched[j]);
    out.l_exists_cycle = acc / m_est;
  }

  if (!cycle_match.pairs.empty()) {
    if (static_cast<int>(gt.cycle_centers.size()) != m_gt)
      throw ParameterError("ground-truth cycle centers do not match cover rows");
    double acc = 0.0;
    for (const auto& [m, j] : cycle_match.pairs) {
      acc += std::abs(gt.cycle_centers[m].x - pred.cycle_center[j].x);
      acc += std::abs(gt.cycle_centers[m].y - pred.cycle_center[j].y);
    }
    out.l_center = acc / (2.0 * static_cast<double>(cycle_match.pairs.size()));
  }

  out.total = out.l_splines + w.beta_e * out.l_exists_curve + w.beta_c * out.l_connect +
              w.alpha * (out.l_member + w.beta_d * out.l_exists_cycle + w.beta_f * out.l_center);
  return out;
}

}  // namespace lanetopo
