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

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dictionary.hpp"
#include "raytrace.hpp"
#include "scenario.hpp"

namespace spectramap {

inline constexpr double kMseFloorDb = -300.0;
inline constexpr double kDbmFloor = -200.0;

// 10 log10(|est - true| / |true|), floored at kMseFloorDb. `squared` uses the
// ratio of squared norms instead.
double mse_db(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth, bool squared = false);

double watts_to_dbm(double watts);

// Root mean square difference of the two maps in dBm.
double rmse_dbm(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth);
double rmse_linear(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth);

// Hausdorff distance (m) between the centers of the true and estimated
// transmitter cubes. An empty side yields the ROI diagonal.
double support_distortion(const ScenarioConfig& cfg, const Eigen::VectorXd& omega_est,
                          const Eigen::VectorXd& omega_true);

// Smallest M with M > 2 K ln(N / K).
std::size_t sample_complexity_bound(std::size_t n, std::size_t k);

struct ExperimentSpec {
  ScenarioConfig scenario;  // transmitters are generated per cell
  RtParams rt;
  DictionaryMode rt_dictionary;  // dictionary used by the "M" algorithms
  std::vector<double> rates{0.1};
  std::vector<int> sparsities{4};
  std::vector<std::string> algorithms;
  std::vector<std::uint64_t> seeds{1};
  double power_watts = 2.0;
  // Transmitters at random free cube centers; otherwise at continuous
  // positions anywhere outside buildings.
  bool grid_transmitters = true;
  bool free_space_truth = false;
  bool record_runtime = true;
  bool squared_mse = false;
  unsigned jobs = 1;
};

void validate(const ExperimentSpec& spec);
// Default sweep on the bundled box scene.
ExperimentSpec default_experiment();

struct MetricRecord {
  std::string algorithm;
  double rate = 0.0;
  int sparsity = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double mse_db = 0.0;
  double rmse = 0.0;
  double rmse_linear = 0.0;
  double runtime_seconds = 0.0;
  double support_distortion = 0.0;
  std::string error;  // empty on success
};

std::vector<MetricRecord> run_experiment(const ExperimentSpec& spec);

struct SummaryRow {
  std::string algorithm;
  double rate = 0.0;
  int sparsity = 0;
  std::size_t count = 0;
  double mse_db_mean = 0.0, mse_db_std = 0.0;
  double rmse_mean = 0.0, rmse_std = 0.0;
  double distortion_mean = 0.0, distortion_std = 0.0;
  double runtime_mean = 0.0;
};

// Mean and sample standard deviation per (algorithm, rate, K) over the
// successful records.
std::vector<SummaryRow> summarize(const std::vector<MetricRecord>& records);

}  // namespace spectramap
