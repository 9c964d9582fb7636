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

#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "error.hpp"
#include "scenario.hpp"

using namespace spectramap;
using doctest::Approx;

TEST_CASE("cube centers follow x-fastest linearization") {
  ScenarioConfig cfg;
  Vec3 c0 = cube_center(cfg, 0);
  CHECK(c0.x() == Approx(5.0));
  CHECK(c0.y() == Approx(5.0));
  CHECK(c0.z() == Approx(2.5));

  Vec3 last = cube_center(cfg, linearize(cfg.grid, {9, 9, 9}));
  CHECK(last.x() == Approx(95.0));
  CHECK(last.y() == Approx(95.0));
  CHECK(last.z() == Approx(47.5));

  CHECK(linearize(cfg.grid, {1, 0, 0}) == 1);
  CHECK(linearize(cfg.grid, {0, 1, 0}) == 10);
  CHECK(linearize(cfg.grid, {0, 0, 1}) == 100);
  for (std::size_t n : {0UL, 7UL, 123UL, 999UL}) CHECK(linearize(cfg.grid, delinearize(cfg.grid, n)) == n);

  ScenarioConfig unit;
  unit.roi_extent = {2, 2, 2};
  unit.grid = {1, 1, 1};
  CHECK(cube_center(unit, 0).isApprox(Vec3(1, 1, 1)));
  CHECK_THROWS_AS(cube_center(cfg, 1000), Error);
}

TEST_CASE("containing cube inverts cube center") {
  ScenarioConfig cfg;
  for (std::size_t n = 0; n < cfg.cube_count(); n += 37) CHECK(containing_cube(cfg, cube_center(cfg, n)) == n);
  CHECK(containing_cube(cfg, {100.0, 100.0, 50.0}) == cfg.cube_count() - 1);
}

TEST_CASE("sparse truth sums co-located powers") {
  ScenarioConfig cfg;
  CHECK(sparse_truth(cfg).isZero());

  cfg.transmitters = {{cube_center(cfg, 42), 2.0}};
  auto w = sparse_truth(cfg);
  CHECK(w[42] == 2.0);
  CHECK(w.sum() == 2.0);

  cfg.transmitters = {{cube_center(cfg, 7), 1.0}, {cube_center(cfg, 7) + Vec3(1, 1, 1), 1.0}};
  w = sparse_truth(cfg);
  CHECK(w[7] == 2.0);
  CHECK(w.sum() == 2.0);
}

TEST_CASE("euclidean distance") {
  CHECK(euclidean_distance({0, 0, 0}, {3, 4, 0}) == 5.0);
  CHECK(euclidean_distance({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(euclidean_distance({0, 0, 0}, {1, 1, 1}) == Approx(std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("free-space rss") {
  ScenarioConfig cfg;
  CHECK(free_space_rss(cfg, 100.0, 2.0) == Approx(1.138e-7).epsilon(5e-3));
  CHECK(free_space_rss(cfg, 100.0, 0.0) == 0.0);
  CHECK(free_space_rss(cfg, 20.0, 1.0) / free_space_rss(cfg, 10.0, 1.0) == Approx(0.25));
  CHECK_THROWS_AS(free_space_rss(cfg, 0.0, 1.0), Error);
  // 72.4 dB path loss at 100 m, 1 GHz.
  CHECK(-10.0 * std::log10(free_space_rss(cfg, 100.0, 1.0)) == Approx(72.4).epsilon(1e-3));
}

TEST_CASE("total rss superposes transmitters") {
  ScenarioConfig cfg;
  const Vec3 p(50, 50, 25);
  cfg.transmitters = {{{10, 50, 25}, 2.0}};
  CHECK(total_rss_at(cfg, p) == Approx(free_space_rss(cfg, 40.0, 2.0)));

  cfg.transmitters.push_back({{90, 50, 25}, 2.0});
  CHECK(total_rss_at(cfg, p) == Approx(2.0 * free_space_rss(cfg, 40.0, 2.0)));

  std::mt19937_64 rng(3);
  cfg.transmitters = random_transmitters(cfg, 4, 2.0, rng);
  double loop = 0.0;
  for (const auto& tx : cfg.transmitters) loop += free_space_rss(cfg, euclidean_distance(tx.position, p), tx.power_watts);
  CHECK(total_rss_at(cfg, p) == Approx(loop).epsilon(1e-14));
}

TEST_CASE("random transmitters avoid buildings") {
  auto cfg = box_scenario();
  REQUIRE_FALSE(cfg.buildings.empty());
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    for (const auto& tx : random_transmitters(cfg, 8, 1.0, rng)) {
      CHECK(cfg.inside_roi(tx.position));
      CHECK_FALSE(cfg.inside_building(tx.position));
    }
    auto grid = random_grid_transmitters(cfg, 8, 1.0, rng);
    std::set<std::size_t> cubes;
    for (const auto& tx : grid) {
      const auto n = containing_cube(cfg, tx.position);
      CHECK(tx.position.isApprox(cube_center(cfg, n)));
      CHECK_FALSE(cfg.inside_building(tx.position));
      cubes.insert(n);
    }
    CHECK(cubes.size() == grid.size());
  }
}

TEST_CASE("scenario validation") {
  ScenarioConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.grid.nx = 0;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = ScenarioConfig{};
  cfg.frequency_hz = -1.0;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = ScenarioConfig{};
  cfg.transmitters = {{{200, 0, 0}, 1.0}};
  CHECK_THROWS_AS(validate(cfg), Error);
}
