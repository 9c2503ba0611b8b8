#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "post/diamond.hpp"
#include "post/gst.hpp"
#include "post/post_run.hpp"

namespace post {

using json = nlohmann::json;

// PTM <-> {"num_qubits": n, "entries": [row-major doubles]}.
json ptm_to_json(const PauliTransferMatrix& r);
PauliTransferMatrix ptm_from_json(const json& j);

json gateset_to_json(const GateSet& gs);
GateSet gateset_from_json(const json& j);

json correction_to_json(const CorrectionParams& params);
CorrectionParams correction_from_json(const json& j);

// Includes a Table-style display row with angles at three decimals.
json seed_to_json(const SeedResult& seed, const std::string& tag);
SeedResult seed_from_json(const json& j);

json decay_fit_to_json(const DecayFit& fit);
json rb_curve_to_json(const RBCurve& curve);
json post_report_to_json(const PostRunReport& report);

json diamond_bounds_to_json(const DiamondBounds& b);
json drift_report_to_json(const DriftReport& report);

// Line-oriented dataset: one record per line,
//   prep germ meas L circuit c00 c01 c10 c11 shots
// with '#' comment headers carrying the fiducial and germ catalogs.
std::string dataset_to_text(const GSTDataset& dataset);
GSTDataset dataset_from_text(const std::string& text);

std::string rb_curve_to_csv(const RBCurve& curve);
std::string drift_report_to_csv(const DriftReport& report);

// Markdown summary table mirroring the corrective-parameter layout:
// one row per cycle tag, angles at three decimals.
std::string params_markdown_table(
    const std::vector<std::pair<std::string, CorrectionParams>>& rows);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace post
