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

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "clustering.hpp"
#include "sampling.hpp"
#include "sbl.hpp"
#include "scenario.hpp"
#include "swomp.hpp"

namespace spectramap {

enum class Solver { Sbl, Swomp };

struct RecoveryOptions {
  Solver solver = Solver::Sbl;
  SblHyperparams hyper;
  bool clustering = true;
  double delta_db = -30.0;
  double theta = 0.5;
  SwompOptions swomp;
};

// Toggles behind the algorithm names: the Random/MMI prefix picks the
// sampler, "M" the ray-traced dictionary (free-space otherwise), "C" the
// adaptive pruning plus clustering refinement.
struct AlgorithmSpec {
  std::string name;
  SamplingMethod sampler = SamplingMethod::Random;
  bool rt_dictionary = false;
  RecoveryOptions recovery;
};

// Prune threshold on normalized alpha^-1 for the non-clustering SBL variants.
inline constexpr double kFixedPruneThreshold = 1e-2;

AlgorithmSpec algorithm_from_name(const std::string& name);
const std::vector<std::string>& known_algorithms();

struct RecoveredMap {
  std::string method;
  Eigen::VectorXd omega_raw;   // solver output, negatives zeroed
  Eigen::VectorXd omega_star;  // final sparse estimate, watts
  Eigen::VectorXd x_hat;       // dictionary * omega_star
  std::optional<SblPosterior> posterior;
  std::optional<ClusterReport> clusters;
  std::optional<SwompResult> swomp;
};

RecoveredMap recover(const ScenarioConfig& cfg, const Eigen::MatrixXd& dictionary, const SamplingPlan& plan,
                     const MeasurementVector& measurements, const RecoveryOptions& options,
                     const std::string& method = "custom");

}  // namespace spectramap
