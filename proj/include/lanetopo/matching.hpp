#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "lanetopo/errors.hpp"
#include "lanetopo/geometry.hpp"

namespace lanetopo {

/// Dense row-major boolean matrix (membership tables, cycle covers).
struct BoolMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> v;

  BoolMatrix() = default;
  BoolMatrix(int r, int c) : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, 0) {}
  std::uint8_t& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
  std::uint8_t at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }
};

struct HungarianResult {
  std::vector<std::pair<int, int>> pairs;  // (row, col), sorted by row
  double total_cost = 0.0;
};

/// Minimum-cost assignment of rows to columns; rectangular inputs match
/// min(rows, cols) pairs. Cost ties are resolved by scan order (lowest row,
/// then lowest column), which keeps the result deterministic. Non-finite
/// costs throw ParameterError.
HungarianResult hungarian(const std::vector<std::vector<double>>& cost);

double l1_control_distance(const std::array<double, 6>& a, const std::array<double, 6>& b);

/// cost[i][j] = L1 distance between the control points of est[i] and gt[j].
std::vector<std::vector<double>> curve_l1_cost(const std::vector<QuadBezier>& est,
                                               const std::vector<QuadBezier>& gt);

/// Nearest-ground-truth assignment: every estimated curve maps to its
/// cheapest ground-truth curve (ties to the lowest index). Not injective.
struct Assignment {
  std::vector<int> to_gt;               // est index -> gt index, -1 when gt is empty
  std::vector<std::vector<int>> to_est; // gt index -> est indices, ascending
};

Assignment min_match(const std::vector<std::vector<double>>& cost, int n_gt);
Assignment min_match(const std::vector<QuadBezier>& est, const std::vector<QuadBezier>& gt);

/// Rewrites ground-truth cycle membership rows (over n_gt curves + k border
/// columns) into estimate indexing: est column j copies the row entry of its
/// assigned ground-truth curve, border columns copy over by rank.
BoolMatrix remap_cycle_targets(const BoolMatrix& gt_cycles, const Assignment& assign,
                               int n_est, int n_gt, int k);

struct CycleMatchStats {
  std::vector<std::pair<int, int>> pairs;  // (gt cycle, proposal), cost-bearing matches
  long tp = 0, fp = 0, fn = 0;
  double f_score() const;  // 100 * 2tp / (2tp + fp + fn); 100 when all zero
};

/// Cycle agreement between ground-truth covers (rows over n_gt + k columns)
/// and proposal rows (over n_est + k columns), grouped per ground-truth
/// curve: proposal j is credited with curve column k_gt when any est curve
/// assigned to k_gt is set in row j. Cycles pair up by minimum disagreement
/// (Hungarian on FN' + FP'); unmatched ground-truth cycles count all their
/// positives as misses, unmatched proposals are ignored.
CycleMatchStats match_cycles(const BoolMatrix& gt_covers, const BoolMatrix& proposals,
                             const std::vector<int>& est_to_gt, int n_gt, int k);

}  // namespace lanetopo
