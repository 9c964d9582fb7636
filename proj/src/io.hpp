// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The spectramap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "dictionary.hpp"
#include "evaluation.hpp"
#include "pipeline.hpp"
#include "raytrace.hpp"
#include "sampling.hpp"
#include "scenario.hpp"

namespace spectramap::io {

using nlohmann::json;
namespace fs = std::filesystem;

// Scenario document: the grid, radio parameters, buildings, transmitters and
// an optional "raytrace" block. All lengths in meters, powers in watts,
// frequency in hertz.
struct ScenarioFile {
  ScenarioConfig scenario;
  RtParams rt;
};

json to_json(const ScenarioConfig& cfg, const RtParams& rt);
ScenarioFile scenario_from_json(const json& doc);
ScenarioFile load_scenario(const fs::path& path);
void save_scenario(const fs::path& path, const ScenarioConfig& cfg, const RtParams& rt);

json to_json(const RtParams& rt);
RtParams rt_from_json(const json& doc);
json to_json(const DictionaryMode& mode);
DictionaryMode dictionary_mode_from_json(const json& doc);

// Binary container: magic, header, row-major float64 gains, and a packed
// bitmask with one bit per entry set where the gain was interpolated.
void save_dictionary(const fs::path& path, const GainDictionary& dict);
GainDictionary load_dictionary(const fs::path& path);
// i, j, gain_db
void export_dictionary_csv(const fs::path& path, const GainDictionary& dict);

json to_json(const SamplingPlan& plan);
SamplingPlan plan_from_json(const json& doc);
void save_plan(const fs::path& path, const SamplingPlan& plan);
SamplingPlan load_plan(const fs::path& path);

json to_json(const MeasurementVector& meas, const SamplingPlan& plan);
MeasurementVector measurements_from_json(const json& doc);
void save_measurements(const fs::path& path, const MeasurementVector& meas, const SamplingPlan& plan);
MeasurementVector load_measurements(const fs::path& path);

// Recovery result with enough of the grid to place every cube.
struct ResultFile {
  std::string method;
  Vec3 roi_extent = Vec3::Zero();
  GridDims grid;
  Eigen::VectorXd omega_star;
  Eigen::VectorXd x_hat;
};

json to_json(const ScenarioConfig& cfg, const RecoveredMap& result, const RecoveryOptions& options);
void save_result(const fs::path& path, const ScenarioConfig& cfg, const RecoveredMap& result,
                 const RecoveryOptions& options);
ResultFile load_result(const fs::path& path);

ExperimentSpec experiment_from_json(const json& doc);
json to_json(const ExperimentSpec& spec);
ExperimentSpec load_experiment(const fs::path& path);

void write_records_csv(std::ostream& out, const std::vector<MetricRecord>& records);
json to_json(const std::vector<SummaryRow>& rows);
// Writes records.csv, summary.json, curves_vs_rate.csv and curves_vs_k.csv.
void save_experiment_outputs(const fs::path& dir, const std::vector<MetricRecord>& records);

enum class MapFormat { Long, Slices };
MapFormat map_format_from_name(const std::string& name);
// Long: ix, iy, iz, x_m, y_m, z_m, rss_dbm. Slices: one block per z level,
// rows are y and columns are x, values in dBm.
void export_map(std::ostream& out, const ResultFile& result, MapFormat format);

json read_json(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);
// %.17g
std::string format_double(double value);

}  // namespace spectramap::io
