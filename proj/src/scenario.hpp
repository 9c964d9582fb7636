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

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace spectramap {

using Vec3 = Eigen::Vector3d;

inline constexpr double kSpeedOfLight = 299792458.0;

struct AxisAlignedBox {
  Vec3 min_corner = Vec3::Zero();
  Vec3 max_corner = Vec3::Zero();

  bool contains(const Vec3& p) const;
  // True when the open segment (a, b) passes through the box interior.
  // Touching a face or edge does not count, so a path that ends on a
  // reflecting face is not blocked by that face's own box.
  bool blocks_segment(const Vec3& a, const Vec3& b) const;
};

struct Transmitter {
  Vec3 position = Vec3::Zero();
  double power_watts = 0.0;
};

struct GridDims {
  int nx = 1;
  int ny = 1;
  int nz = 1;

  std::size_t count() const { return static_cast<std::size_t>(nx) * ny * nz; }
  bool operator==(const GridDims&) const = default;
};

struct GridIndex {
  int ix = 0;
  int iy = 0;
  int iz = 0;
  bool operator==(const GridIndex&) const = default;
};

struct ScenarioConfig {
  Vec3 roi_extent{100.0, 100.0, 50.0};
  GridDims grid{10, 10, 10};
  std::vector<AxisAlignedBox> buildings;
  std::vector<Transmitter> transmitters;
  double frequency_hz = 1e9;
  double noise_variance = 0.0;  // W^2
  double antenna_gain_tx = 1.0;
  double antenna_gain_rx = 1.0;
  double path_loss_exponent = 2.0;

  std::size_t cube_count() const { return grid.count(); }
  double wavelength() const { return kSpeedOfLight / frequency_hz; }
  Vec3 cell_size() const;
  bool inside_roi(const Vec3& p) const;
  bool inside_building(const Vec3& p) const;
};

// Throws Error(InvalidArgument) describing the first violated invariant.
void validate(const ScenarioConfig& cfg);

// n = ix + nx * (iy + ny * iz)
std::size_t linearize(const GridDims& dims, const GridIndex& idx);
GridIndex delinearize(const GridDims& dims, std::size_t n);

Vec3 cube_center(const ScenarioConfig& cfg, std::size_t n);
std::vector<Vec3> cube_centers(const ScenarioConfig& cfg);

// Cube containing p. A point on a shared face goes to the lower-index cube.
std::size_t containing_cube(const ScenarioConfig& cfg, const Vec3& p);

// Per-cube transmit power; co-located transmitters add up.
Eigen::VectorXd sparse_truth(const ScenarioConfig& cfg);

double euclidean_distance(const Vec3& a, const Vec3& b);

// G_t G_r lambda^2 p_t / ((4 pi)^2 d^eta)
double free_space_rss(const ScenarioConfig& cfg, double d, double p_t);
double total_rss_at(const ScenarioConfig& cfg, const Vec3& position);

// K transmitters of the given power at uniform positions in the ROI,
// rejecting positions inside buildings.
std::vector<Transmitter> random_transmitters(const ScenarioConfig& cfg, int count,
                                             double power_watts, std::mt19937_64& rng);

// K transmitters at the centers of distinct cubes drawn uniformly from the
// cubes whose centers lie outside buildings.
std::vector<Transmitter> random_grid_transmitters(const ScenarioConfig& cfg, int count, double power_watts,
                                                  std::mt19937_64& rng);
// 100 x 100 x 50 m ROI, 10 x 10 x 10 grid, 1 GHz, unit gains, eta = 2.
ScenarioConfig default_scenario();
// default_scenario() plus a small block of buildings.
ScenarioConfig box_scenario();

}  // namespace spectramap
