#include "lanetopo/bundle.hpp"

#include <map>
#include <cmath>
#include <sstream>

namespace lanetopo {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw SchemaError(what);
}

bool is_prob(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

void PredictionBundle::check(int k_border) const {
  int n = n_curves();
  int m = n_cycles();
  require(curve_prob.size() == curves.size(), "curve probabilities do not match curve count");
  for (const auto& c : curves)
    for (double x : c) require(std::isfinite(x), "non-finite curve coordinate");
  for (double p : curve_prob) require(is_prob(p), "curve probability outside [0,1]");
  require(static_cast<int>(connectivity.size()) == n, "connectivity is not N x N");
  for (const auto& row : connectivity) {
    require(static_cast<int>(row.size()) == n, "connectivity is not N x N");
    for (double x : row) require(is_prob(x), "connectivity entry outside [0,1]");
  }
  for (const auto& row : cycle_member) {
    require(static_cast<int>(row.size()) == n + k_border,
            "cycle membership row does not span curves + borders");
    for (double x : row) require(is_prob(x), "cycle membership outside [0,1]");
  }
  require(static_cast<int>(cycle_prob.size()) == m, "cycle probabilities do not match cycle count");
  for (double p : cycle_prob) require(is_prob(p), "cycle probability outside [0,1]");
  require(static_cast<int>(cycle_center.size()) == m, "cycle centers do not match cycle count");
  for (const auto& c : cycle_center)
    require(std::isfinite(c.x) && std::isfinite(c.y), "non-finite cycle center");
}

GroundTruthBundle ground_truth_bundle(const LaneGraph& g, const Arrangement& arr) {
  if (arr.cycles.empty()) throw ParameterError("arrangement has no extracted cycles");

  auto lanes = g.lane_ids();
  auto borders = g.boundary_ids();
  {
    // The arrangement must describe the same graph.
    std::vector<CurveId> a, b;
    for (const auto& c : g.curves()) a.push_back(c.id);
    for (const auto& c : arr.curves) b.push_back(c.id);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw ParameterError("arrangement does not belong to this graph");
  }

  int n = static_cast<int>(lanes.size());
  int k = static_cast<int>(borders.size());
  GroundTruthBundle gt;
  for (CurveId id : lanes) gt.curves.push_back(control_array(g.curve(id).bezier));

  gt.incidence = BoolMatrix(n, n);
  std::map<CurveId, int> lane_index;
  for (int i = 0; i < n; ++i) lane_index[lanes[i]] = i;
  for (const auto& [from, to] : g.incidence())
    gt.incidence.at(lane_index[from], lane_index[to]) = 1;

  gt.cycle_covers = BoolMatrix(static_cast<int>(arr.cycles.size()), n + k);
  for (int m = 0; m < gt.cycle_covers.rows; ++m) {
    for (CurveId id : arr.cycles[m].cover) {
      auto it = lane_index.find(id);
      if (it != lane_index.end()) {
        gt.cycle_covers.at(m, it->second) = 1;
        continue;
      }
      for (int b = 0; b < k; ++b) {
        if (borders[b] == id) {
          gt.cycle_covers.at(m, n + b) = 1;
          break;
        }
      }
    }
    gt.cycle_centers.push_back(arr.cycles[m].centroid);
  }
  return gt;
}

LaneGraph prediction_graph(const PredictionBundle& pred, const FovSpec& fov, double threshold) {
  pred.check(4);
  int n = pred.n_curves();
  std::vector<LaneCurve> curves;
  std::vector<char> kept(n, 0);
  for (int i = 0; i < n; ++i) {
    if (pred.curve_prob[i] < threshold) continue;
    kept[i] = 1;
    const auto& c = pred.curves[i];
    curves.push_back({i, CurveRole::Lane,
                      QuadBezier({c[0], c[1]}, {c[2], c[3]}, {c[4], c[5]})});
  }
  // Border ids continue after the *full* candidate range so that candidate
  // indices stay stable under gating.
  for (const auto& b : fov_boundary_curves(n)) curves.push_back(b);

  std::vector<std::pair<CurveId, CurveId>> incidence;
  for (int i = 0; i < n; ++i) {
    if (!kept[i]) continue;
    for (int j = 0; j < n; ++j) {
      if (i == j || !kept[j]) continue;  // self-connections are ignored
      if (pred.connectivity[i][j] >= 0.5) incidence.emplace_back(i, j);
    }
  }
  return merge_connected(LaneGraph(fov, std::move(curves), std::move(incidence)));
}

}  // namespace lanetopo
