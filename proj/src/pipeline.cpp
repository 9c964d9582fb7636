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

#include "pipeline.hpp"

#include <algorithm>

#include "error.hpp"

namespace spectramap {

const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names{"Random-SBL", "Random-CSBL", "Random-MSBL",
                                              "MMI-SBL",    "MMI-CMSBL",   "Random-SWOMP"};
  return names;
}

AlgorithmSpec algorithm_from_name(const std::string& name) {
  const auto dash = name.find('-');
  require(dash != std::string::npos, "unknown algorithm '" + name + "'");
  const std::string prefix = name.substr(0, dash);
  const std::string body = name.substr(dash + 1);

  AlgorithmSpec spec;
  spec.name = name;
  if (prefix == "Random") {
    spec.sampler = SamplingMethod::Random;
  } else if (prefix == "MMI") {
    spec.sampler = SamplingMethod::Mmi;
  } else {
    fail(ErrorKind::InvalidArgument, "unknown sampler prefix in '" + name + "'");
  }

  if (body == "SWOMP") {
    spec.recovery.solver = Solver::Swomp;
    spec.recovery.clustering = false;
    return spec;
  }
  require(body.size() >= 3 && body.ends_with("SBL"), "unknown algorithm '" + name + "'");
  const std::string flags = body.substr(0, body.size() - 3);
  require(flags.find_first_not_of("CM") == std::string::npos, "unknown algorithm flags in '" + name + "'");
  spec.rt_dictionary = flags.find('M') != std::string::npos;
  spec.recovery.clustering = flags.find('C') != std::string::npos;
  spec.recovery.hyper.prune =
      spec.recovery.clustering ? PruneMode::adaptive() : PruneMode::fixed(kFixedPruneThreshold);
  return spec;
}

RecoveredMap recover(const ScenarioConfig& cfg, const Eigen::MatrixXd& dictionary, const SamplingPlan& plan,
                     const MeasurementVector& measurements, const RecoveryOptions& options,
                     const std::string& method) {
  const auto n = static_cast<Eigen::Index>(cfg.cube_count());
  require(dictionary.rows() == n && dictionary.cols() == n, "recover: dictionary does not match the scenario grid");
  require(plan.cube_count == cfg.cube_count(), "recover: plan does not match the scenario grid");
  require(measurements.values.size() == static_cast<Eigen::Index>(plan.size()),
          "recover: measurement count does not match the plan");
  validate(plan);

  const Eigen::MatrixXd phi = sensing_matrix(dictionary, plan);
  RecoveredMap out;
  out.method = method;
  if (options.solver == Solver::Swomp) {
    out.swomp = swomp_solve(phi, measurements.values, options.swomp);
    out.omega_raw = out.swomp->omega;
  } else {
    out.posterior = sbl_solve(phi, measurements.values, options.hyper);
    out.omega_raw = out.posterior->mu.cwiseMax(0.0);
  }

  out.omega_star = out.omega_raw;
  if (options.clustering) {
    const auto candidates = sparsify(out.omega_raw, options.delta_db);
    if (!candidates.empty()) {
      const auto partition = mmd_cluster(cfg, candidates, options.theta);
      ClusterReport report;
      report.theta = options.theta;
      report.delta_db = options.delta_db;
      out.omega_star = refine_clusters(cfg, candidates, partition, &report);
      out.clusters = std::move(report);
    }
  }
  out.x_hat = synthesize_map(dictionary, out.omega_star);
  if (!out.x_hat.allFinite()) fail(ErrorKind::Numerical, "recover: synthesized map is not finite");
  return out;
}

}  // namespace spectramap
