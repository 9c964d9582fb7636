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

#include <array>

#include "dictionary.hpp"
#include "doctest.h"
#include "error.hpp"

using namespace spectramap;
using doctest::Approx;

namespace {

ScenarioConfig small_scene(int nx, int ny, int nz) {
  ScenarioConfig cfg;
  cfg.grid = {nx, ny, nz};
  return cfg;
}

RtParams no_ground() {
  RtParams p;
  p.ground_reflection = false;
  return p;
}

}  // namespace

TEST_CASE("full ray-traced dictionary of an empty scene is Friis") {
  auto cfg = small_scene(2, 2, 2);
  auto dict = build_dictionary(cfg, no_ground(), {});
  REQUIRE(dict.size() == 8);
  const auto centers = cube_centers(cfg);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      const double expect =
          i == j ? self_gain(cfg, no_ground()) : free_space_rss(cfg, euclidean_distance(centers[i], centers[j]), 1.0);
      CHECK(dict.gains(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("dictionary is symmetric and the free-space kind ignores buildings") {
  auto cfg = box_scenario();
  cfg.grid = {4, 4, 2};
  auto rt = build_dictionary(cfg, RtParams{}, {});
  CHECK((rt.gains - rt.gains.transpose()).norm() == 0.0);
  CHECK((rt.gains.array() >= kGainFloor).all());

  DictionaryMode fs;
  fs.kind = DictionaryKind::FreeSpace;
  auto free = build_dictionary(cfg, RtParams{}, fs);
  auto empty = cfg;
  empty.buildings.clear();
  auto ref = build_dictionary(empty, no_ground(), {});
  CHECK((free.gains - ref.gains).cwiseAbs().maxCoeff() <= 1e-12 * ref.gains.maxCoeff());
}

TEST_CASE("fraction one reproduces the full dictionary") {
  auto cfg = box_scenario();
  cfg.grid = {3, 3, 2};
  auto full = build_dictionary(cfg, RtParams{}, {});
  DictionaryMode m;
  m.kind = DictionaryKind::SparseRtIdw;
  m.fraction = 1.0;
  auto sparse = build_dictionary(cfg, RtParams{}, m, 2);
  CHECK((full.gains - sparse.gains).norm() == 0.0);
  for (auto f : sparse.interpolated) CHECK(f == 0);
}

TEST_CASE("partial dictionary interpolates the missing entries") {
  auto cfg = small_scene(4, 4, 2);
  DictionaryMode m;
  m.kind = DictionaryKind::SparseRtIdw;
  m.fraction = 0.3;
  m.seed = 9;
  auto dict = build_dictionary(cfg, no_ground(), m);
  auto full = build_dictionary(cfg, no_ground(), {});
  std::size_t filled = 0;
  for (std::size_t i = 0; i < dict.size(); ++i)
    for (std::size_t j = 0; j < dict.size(); ++j) {
      const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
      if (dict.is_interpolated(i, j)) {
        ++filled;
        CHECK(i != j);
        CHECK(dict.gains(a, b) > 0.0);
      } else {
        CHECK(dict.gains(a, b) == Approx(full.gains(a, b)).epsilon(1e-12));
      }
    }
  CHECK(filled > 0);

  m.fraction = 0.01;
  CHECK_THROWS_AS(build_dictionary(cfg, no_ground(), m), Error);
}

TEST_CASE("inverse distance weighting") {
  std::array<IdwAnchor, 4> equal{{{0, 1, 5.0}, {2, 1, 5.0}, {1, 0, 5.0}, {1, 2, 5.0}}};
  CHECK(idw_interpolate(equal, 1, 1, 2.0) == Approx(5.0));

  std::array<IdwAnchor, 2> two{{{0, 0, 1.0}, {0, 3, 4.0}}};
  // weights 1/1 and 1/4 at distances 1 and 2.
  CHECK(idw_interpolate(two, 0, 1, 2.0) == Approx((1.0 + 4.0 / 4.0) / 1.25));
  CHECK(idw_interpolate(two, 0, 3, 2.0) == 4.0);
}

TEST_CASE("ground truth map superposes transmitter columns") {
  auto cfg = small_scene(5, 5, 5);
  CHECK(ground_truth_map(cfg, no_ground()).isZero());

  cfg.transmitters = {{{13, 47, 22}, 2.0}};
  auto x = ground_truth_map(cfg, no_ground());
  const auto centers = cube_centers(cfg);
  for (std::size_t n = 0; n < centers.size(); ++n)
    CHECK(x[static_cast<Eigen::Index>(n)] ==
          Approx(2.0 * free_space_rss(cfg, euclidean_distance(centers[n], cfg.transmitters[0].position), 1.0))
              .epsilon(1e-9));

  auto box = box_scenario();
  box.grid = {5, 5, 5};
  box.transmitters = {{cube_center(box, 3), 2.0}, {cube_center(box, 77), 2.0}, {cube_center(box, 101), 1.0},
                      {cube_center(box, 124), 0.5}};
  auto dict = build_dictionary(box, RtParams{}, {});
  auto truth = ground_truth_map(box, RtParams{});
  Eigen::VectorXd loop = Eigen::VectorXd::Zero(truth.size());
  for (const auto& tx : box.transmitters) loop += tx.power_watts * dict.gains.col(static_cast<Eigen::Index>(containing_cube(box, tx.position)));
  CHECK((truth - loop).norm() <= 1e-12 * loop.norm());
}
