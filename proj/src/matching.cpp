#include "lanetopo/matching.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lanetopo {

HungarianResult hungarian(const std::vector<std::vector<double>>& cost) {
  int nr = static_cast<int>(cost.size());
  int ncols = nr > 0 ? static_cast<int>(cost[0].size()) : 0;
  for (const auto& row : cost) {
    if (static_cast<int>(row.size()) != ncols) throw ParameterError("ragged cost matrix");
    for (double x : row)
      if (!std::isfinite(x)) throw ParameterError("non-finite cost entry");
  }
  if (nr == 0 || ncols == 0) return {};

  // Shortest-augmenting-path assignment (Jonker-Volkenant style) on the
  // orientation with rows <= cols; ties fall to the lowest scan index.
  bool transposed = ncols < nr;
  int n = transposed ? ncols : nr;
  int m = transposed ? nr : ncols;
  auto at = [&](int r, int c) { return transposed ? cost[c][r] : cost[r][c]; };

  const double kInf = 1e18;
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  HungarianResult res;
  for (int j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    int r = p[j] - 1, c = j - 1;
    if (transposed) std::swap(r, c);
    res.pairs.emplace_back(r, c);
  }
  std::sort(res.pairs.begin(), res.pairs.end());
  for (const auto& [r, c] : res.pairs) res.total_cost += cost[r][c];
  return res;
}

double l1_control_distance(const std::array<double, 6>& a, const std::array<double, 6>& b) {
  double d = 0.0;
  for (int i = 0; i < 6; ++i) d += std::abs(a[i] - b[i]);
  return d;
}

std::vector<std::vector<double>> curve_l1_cost(const std::vector<QuadBezier>& est,
                                               const std::vector<QuadBezier>& gt) {
  std::vector<std::vector<double>> cost(est.size(), std::vector<double>(gt.size(), 0.0));
  for (std::size_t i = 0; i < est.size(); ++i) {
    auto ca = control_array(est[i]);
    for (std::size_t j = 0; j < gt.size(); ++j)
      cost[i][j] = l1_control_distance(ca, control_array(gt[j]));
  }
  return cost;
}

Assignment min_match(const std::vector<std::vector<double>>& cost, int n_gt) {
  if (n_gt < 0) throw ParameterError("negative ground-truth count");
  Assignment out;
  out.to_gt.assign(cost.size(), -1);
  out.to_est.assign(n_gt, {});
  for (std::size_t i = 0; i < cost.size(); ++i) {
    if (static_cast<int>(cost[i].size()) != n_gt) throw ParameterError("ragged cost matrix");
    int best = -1;
    for (int j = 0; j < n_gt; ++j) {
      if (!std::isfinite(cost[i][j])) throw ParameterError("non-finite cost entry");
      if (best < 0 || cost[i][j] < cost[i][best]) best = j;
    }
    out.to_gt[i] = best;
    if (best >= 0) out.to_est[best].push_back(static_cast<int>(i));
  }
  return out;
}

Assignment min_match(const std::vector<QuadBezier>& est, const std::vector<QuadBezier>& gt) {
  return min_match(curve_l1_cost(est, gt), static_cast<int>(gt.size()));
}

BoolMatrix remap_cycle_targets(const BoolMatrix& gt_cycles, const Assignment& assign,
                               int n_est, int n_gt, int k) {
  if (gt_cycles.cols != n_gt + k) throw ParameterError("cycle rows do not span gt curves + borders");
  if (static_cast<int>(assign.to_gt.size()) != n_est)
    throw ParameterError("assignment size does not match estimate count");
  BoolMatrix out(gt_cycles.rows, n_est + k);
  for (int m = 0; m < gt_cycles.rows; ++m) {
    for (int j = 0; j < n_est; ++j) {
      int r = assign.to_gt[j];
      if (r < 0) continue;
      if (r >= n_gt) throw ParameterError("assignment target out of range");
      out.at(m, j) = gt_cycles.at(m, r);
    }
    for (int b = 0; b < k; ++b) out.at(m, n_est + b) = gt_cycles.at(m, n_gt + b);
  }
  return out;
}

double CycleMatchStats::f_score() const {
  long denom = 2 * tp + fp + fn;
  if (denom == 0) return 100.0;
  return 100.0 * 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

CycleMatchStats match_cycles(const BoolMatrix& gt_covers, const BoolMatrix& proposals,
                             const std::vector<int>& est_to_gt, int n_gt, int k) {
  if (gt_covers.rows > 0 && gt_covers.cols != n_gt + k)
    throw ParameterError("ground-truth covers do not span gt curves + borders");
  int n_est = static_cast<int>(est_to_gt.size());
  if (proposals.rows > 0 && proposals.cols != n_est + k)
    throw ParameterError("proposals do not span est curves + borders");
  for (int r : est_to_gt)
    if (r >= n_gt) throw ParameterError("assignment target out of range");

  // Group proposal rows onto the ground-truth curve axis: proposal j covers
  // gt curve kk when any est curve assigned to kk is set in the row; border
  // columns carry over by rank.
  BoolMatrix grouped(proposals.rows, n_gt + k);
  for (int j = 0; j < proposals.rows; ++j) {
    for (int e = 0; e < n_est; ++e)
      if (est_to_gt[e] >= 0 && proposals.at(j, e)) grouped.at(j, est_to_gt[e]) = 1;
    for (int b = 0; b < k; ++b) grouped.at(j, n_gt + b) = proposals.at(j, n_est + b);
  }

  auto row_stats = [&](int m, int j) {
    long tp = 0, fp = 0, fn = 0;
    for (int c = 0; c < n_gt + k; ++c) {
      bool g = gt_covers.at(m, c);
      bool e = grouped.at(j, c);
      tp += g && e;
      fp += !g && e;
      fn += g && !e;
    }
    return std::array<long, 3>{tp, fp, fn};
  };

  // Pair cycles by minimum disagreement.
  std::vector<std::vector<double>> h(gt_covers.rows, std::vector<double>(proposals.rows, 0.0));
  for (int m = 0; m < gt_covers.rows; ++m) {
    for (int j = 0; j < proposals.rows; ++j) {
      auto s = row_stats(m, j);
      h[m][j] = static_cast<double>(s[1] + s[2]);  // FP' + FN'
    }
  }
  HungarianResult hr = proposals.rows > 0 && gt_covers.rows > 0
                           ? hungarian(h)
                           : HungarianResult{};

  CycleMatchStats stats;
  std::vector<char> gt_matched(gt_covers.rows, 0);
  for (const auto& [m, j] : hr.pairs) {
    gt_matched[m] = 1;
    auto s = row_stats(m, j);
    stats.tp += s[0];
    stats.fp += s[1];
    stats.fn += s[2];
    stats.pairs.emplace_back(m, j);
  }
  // Unmatched ground-truth cycles miss all their positives; unmatched
  // proposals do not count against the score.
  for (int m = 0; m < gt_covers.rows; ++m) {
    if (gt_matched[m]) continue;
    for (int c = 0; c < gt_covers.cols; ++c) stats.fn += gt_covers.at(m, c) ? 1 : 0;
  }
  return stats;
}

}  // namespace lanetopo
