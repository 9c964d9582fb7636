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
#include "doctest.h"
#include "error.hpp"
#include "instances.hpp"
#include "oracles.hpp"

using namespace spectramap;
using doctest::Approx;

TEST_CASE("sparsify") {
  Eigen::Vector3d w(1.0, 0.5, 1e-6);
  auto kept = sparsify(w, -40.0);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].index == 0);
  CHECK(kept[1].index == 1);
  CHECK(kept[1].weight == 0.5);
  CHECK(sparsify(w, -1000.0).size() == 3);
  CHECK(sparsify(Eigen::Vector4d::Constant(0.3), -1.0).size() == 4);
  CHECK(sparsify(Eigen::Vector3d::Zero(), -30.0).empty());
  CHECK_THROWS_AS(sparsify(w, 3.0), Error);
}

TEST_CASE("mmd clustering recovers well-separated groups") {
  for (const auto& inst : instances::well_separated()) {
    CAPTURE(inst.name);
    std::vector<Eigen::Vector3d> pts;
    for (const auto& c : inst.candidates) pts.push_back(cube_center(inst.cfg, c.index));
    const auto got = oracle::canonical(mmd_cluster(inst.cfg, inst.candidates, 0.5));
    CHECK(got == oracle::canonical(oracle::best_partition(pts)));
  }
}

TEST_CASE("mmd clustering edge cases") {
  ScenarioConfig cfg;
  std::vector<Candidate> same{{12, 1.0}, {12, 0.5}, {12, 0.2}};
  CHECK(mmd_cluster(cfg, same, 0.5).size() == 1);
  CHECK(mmd_cluster(cfg, {{5, 2.0}}, 0.5).size() == 1);
  CHECK_THROWS_AS(mmd_cluster(cfg, {}, 0.5), Error);
  CHECK_THROWS_AS(mmd_cluster(cfg, same, 1.0), Error);
}

TEST_CASE("cluster refinement") {
  ScenarioConfig line;
  line.roi_extent = {8, 4, 4};
  line.grid = {2, 1, 1};
  std::vector<Candidate> cands{{0, 3.0}, {1, 1.0}};
  ClusterReport report;
  auto w = refine_clusters(line, cands, {{0, 1}}, &report);
  REQUIRE(report.centers.size() == 1);
  CHECK(std::abs(report.centers[0].x() - 3.0) <= 1e-12);
  CHECK(std::abs(report.powers[0] - 2.5) <= 1e-12);
  CHECK(w[0] == 2.5);

  ScenarioConfig cfg;
  std::vector<Candidate> single{{321, 0.8}};
  auto one = refine_clusters(cfg, single, {{0}}, &report);
  CHECK(one[321] == Approx(0.8).epsilon(1e-15));
  CHECK(report.center_cubes[0] == 321);

  std::vector<Candidate> equal{{0, 1.0}, {1, 1.0}, {10, 1.0}, {11, 1.0}};
  refine_clusters(cfg, equal, {{0, 1, 2, 3}}, &report);
  CHECK(report.centers[0].isApprox(Vec3(10, 10, 2.5)));
  CHECK(report.powers[0] == Approx(1.0));
}

TEST_CASE("refined powers follow the weighted-square rule") {
  ScenarioConfig cfg;
  std::vector<Candidate> cands{{3, 0.9}, {4, 0.4}, {13, 0.25}, {500, 1.3}, {501, 0.1}};
  std::vector<std::vector<std::size_t>> parts{{0, 1, 2}, {3, 4}};
  ClusterReport report;
  refine_clusters(cfg, cands, parts, &report);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    double s = 0, s2 = 0;
    Vec3 c = Vec3::Zero();
    for (auto i : parts[k]) {
      s += cands[i].weight;
      s2 += cands[i].weight * cands[i].weight;
      c += cands[i].weight * cube_center(cfg, cands[i].index);
    }
    CHECK(std::abs(report.powers[k] - s2 / s) <= 1e-12);
    CHECK((report.centers[k] - c / s).norm() <= 1e-12);
  }
}

TEST_CASE("map synthesis") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Random(7, 7);
  CHECK(synthesize_map(d, Eigen::VectorXd::Zero(7)).isZero());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(7);
  w[2] = 1.5;
  w[6] = 0.5;
  Eigen::VectorXd loop = Eigen::VectorXd::Zero(7);
  for (Eigen::Index j = 0; j < 7; ++j) loop += w[j] * d.col(j);
  CHECK((synthesize_map(d, w) - loop).norm() < 1e-14);
  CHECK_THROWS_AS(synthesize_map(d, Eigen::VectorXd::Zero(3)), Error);
}
