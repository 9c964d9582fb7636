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

#include "clustering.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"

namespace spectramap {

std::vector<Candidate> sparsify(const Eigen::VectorXd& omega, double delta_db) {
  require(delta_db < 0.0, "sparsify: delta must be negative");
  std::vector<Candidate> out;
  const double peak = omega.size() ? omega.maxCoeff() : 0.0;
  if (!(peak > 0.0)) return out;
  for (Eigen::Index i = 0; i < omega.size(); ++i) {
    const double w = omega[i];
    if (w > 0.0 && 20.0 * std::log10(w / peak) >= delta_db) out.push_back({static_cast<std::size_t>(i), w});
  }
  return out;
}

std::vector<std::vector<std::size_t>> mmd_cluster(const ScenarioConfig& cfg,
                                                  const std::vector<Candidate>& candidates, double theta) {
  require(!candidates.empty(), "mmd_cluster: no candidates");
  require(theta > 0.0 && theta < 1.0, "mmd_cluster: theta must be in (0, 1)");
  const std::size_t q = candidates.size();
  std::vector<Vec3> pos(q);
  for (std::size_t i = 0; i < q; ++i) pos[i] = cube_center(cfg, candidates[i].index);

  std::vector<std::size_t> seeds;
  std::size_t first = 0;
  for (std::size_t i = 1; i < q; ++i)
    if (candidates[i].weight > candidates[first].weight) first = i;
  seeds.push_back(first);

  // min distance from every point to the current seed set
  std::vector<double> nearest(q);
  for (std::size_t i = 0; i < q; ++i) nearest[i] = (pos[i] - pos[first]).norm();

  auto farthest = [&] {
    std::size_t best = 0;
    for (std::size_t i = 1; i < q; ++i)
      if (nearest[i] > nearest[best]) best = i;
    return best;
  };

  const std::size_t second = farthest();
  const double base = nearest[second];
  if (base > 0.0) {
    seeds.push_back(second);
    for (;;) {
      for (std::size_t i = 0; i < q; ++i) nearest[i] = std::min(nearest[i], (pos[i] - pos[seeds.back()]).norm());
      const std::size_t next = farthest();
      if (!(nearest[next] > theta * base)) break;
      seeds.push_back(next);
    }
  }

  std::vector<std::vector<std::size_t>> clusters(seeds.size());
  for (std::size_t i = 0; i < q; ++i) {
    std::size_t owner = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const double d = (pos[i] - pos[seeds[s]]).norm();
      if (d < best) {
        best = d;
        owner = s;
      }
    }
    clusters[owner].push_back(i);
  }
  return clusters;
}

Eigen::VectorXd refine_clusters(const ScenarioConfig& cfg, const std::vector<Candidate>& candidates,
                                const std::vector<std::vector<std::size_t>>& partition,
                                ClusterReport* report) {
  Eigen::VectorXd omega = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cfg.cube_count()));
  if (report) {
    report->clusters.clear();
    report->centers.clear();
    report->center_cubes.clear();
    report->powers.clear();
  }
  for (const auto& members : partition) {
    if (members.empty()) continue;
    Vec3 weighted = Vec3::Zero();
    double sum_w = 0.0;
    double sum_w2 = 0.0;
    std::vector<std::size_t> cubes;
    for (std::size_t k : members) {
      require(k < candidates.size(), "refine_clusters: partition refers to a missing candidate");
      const Candidate& c = candidates[k];
      require(c.weight > 0.0, "refine_clusters: weights must be positive");
      weighted += c.weight * cube_center(cfg, c.index);
      sum_w += c.weight;
      sum_w2 += c.weight * c.weight;
      cubes.push_back(c.index);
    }
    const Vec3 center = weighted / sum_w;
    const double power = sum_w2 / sum_w;
    const std::size_t cube = containing_cube(cfg, center);
    omega[static_cast<Eigen::Index>(cube)] += power;
    if (report) {
      report->clusters.push_back(std::move(cubes));
      report->centers.push_back(center);
      report->center_cubes.push_back(cube);
      report->powers.push_back(power);
    }
  }
  return omega;
}

Eigen::VectorXd synthesize_map(const Eigen::MatrixXd& dictionary, const Eigen::VectorXd& omega) {
  require(dictionary.cols() == omega.size(), "synthesize_map: dimension mismatch");
  return dictionary * omega;
}

}  // namespace spectramap
