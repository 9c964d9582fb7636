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

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "scenario.hpp"

namespace spectramap {

struct Candidate {
  std::size_t index;  // cube
  double weight;      // watts, > 0
};

struct ClusterReport {
  std::vector<std::vector<std::size_t>> clusters;  // cube indices per cluster
  std::vector<Vec3> centers;                        // weighted centroids, meters
  std::vector<std::size_t> center_cubes;            // cube containing each centroid
  std::vector<double> powers;                       // watts
  double theta = 0.5;
  double delta_db = -30.0;
};

// Keeps entries within delta_db (negative) of the largest, measured as
// 20 log10(w_i / max w). Zero and negative entries never survive.
std::vector<Candidate> sparsify(const Eigen::VectorXd& omega, double delta_db);

// Max-min-distance clustering on cube centers. Returns the partition as
// positions into `candidates`, one vector per cluster in seed order.
std::vector<std::vector<std::size_t>> mmd_cluster(const ScenarioConfig& cfg,
                                                  const std::vector<Candidate>& candidates, double theta);

// Weighted centroid and w^2-weighted power per cluster; each cluster's power
// lands on the cube containing its centroid.
Eigen::VectorXd refine_clusters(const ScenarioConfig& cfg, const std::vector<Candidate>& candidates,
                                const std::vector<std::vector<std::size_t>>& partition,
                                ClusterReport* report = nullptr);

// X = phi * omega
Eigen::VectorXd synthesize_map(const Eigen::MatrixXd& dictionary, const Eigen::VectorXd& omega);

}  // namespace spectramap
