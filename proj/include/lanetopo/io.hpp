#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "lanetopo/bundle.hpp"
#include "lanetopo/lanegraph.hpp"
#include "lanetopo/loss.hpp"
#include "lanetopo/metrics.hpp"
#include "lanetopo/topology.hpp"

namespace lanetopo {

using ordered_json = nlohmann::ordered_json;

// Graph files ("version": "1"): fov spec, curves with id / role / three
// control points, incidence pairs. Coordinates are normalized by default; a
// file may set "frame": "world" to use fov meters instead (converted at
// load; serialization always writes normalized). Malformed payloads throw
// SchemaError.
ordered_json graph_to_json(const LaneGraph& g);
LaneGraph graph_from_json(const ordered_json& j);
LaneGraph load_graph(const std::filesystem::path& path);
void save_graph(const LaneGraph& g, const std::filesystem::path& path);

// Prediction files ("version": "1"): curve candidates (6 coordinates +
// probability), connectivity matrix, cycle proposals.
ordered_json prediction_to_json(const PredictionBundle& pred);
PredictionBundle prediction_from_json(const ordered_json& j, int k_border = 4);
PredictionBundle load_prediction(const std::filesystem::path& path, int k_border = 4);

// Report payloads for the command-line tool.
ordered_json validation_to_json(const ValidationReport& report);
ordered_json cycles_to_json(const Arrangement& arr);
ordered_json metrics_to_json(const SceneMetrics& m);
ordered_json loss_to_json(const LossBreakdown& b, const LossWeights& w);

/// Serializes with two-space indent and a trailing newline; numbers use the
/// shortest round-trip form, so equal values always produce equal bytes.
std::string dump_json(const ordered_json& j);
void write_json(const ordered_json& j, const std::filesystem::path& path);
ordered_json read_json_file(const std::filesystem::path& path);  // SchemaError on parse failure

}  // namespace lanetopo
