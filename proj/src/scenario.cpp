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

#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "error.hpp"

namespace spectramap {

namespace {

constexpr double kBoxTolerance = 1e-9;

std::string vec_str(const Vec3& v) {
  std::ostringstream os;
  os << "(" << v.x() << ", " << v.y() << ", " << v.z() << ")";
  return os.str();
}

}  // namespace

bool AxisAlignedBox::contains(const Vec3& p) const {
  return (p.array() > min_corner.array()).all() && (p.array() < max_corner.array()).all();
}

bool AxisAlignedBox::blocks_segment(const Vec3& a, const Vec3& b) const {
  const Vec3 dir = b - a;
  double t_lo = 0.0;
  double t_hi = 1.0;
  for (int k = 0; k < 3; ++k) {
    const double lo = min_corner[k] + kBoxTolerance;
    const double hi = max_corner[k] - kBoxTolerance;
    if (std::abs(dir[k]) < 1e-15) {
      if (a[k] <= lo || a[k] >= hi) return false;
      continue;
    }
    double t1 = (lo - a[k]) / dir[k];
    double t2 = (hi - a[k]) / dir[k];
    if (t1 > t2) std::swap(t1, t2);
    t_lo = std::max(t_lo, t1);
    t_hi = std::min(t_hi, t2);
    if (t_lo >= t_hi) return false;
  }
  return true;
}

Vec3 ScenarioConfig::cell_size() const {
  return {roi_extent.x() / grid.nx, roi_extent.y() / grid.ny, roi_extent.z() / grid.nz};
}

bool ScenarioConfig::inside_roi(const Vec3& p) const {
  return (p.array() >= 0.0).all() && (p.array() <= roi_extent.array()).all();
}

bool ScenarioConfig::inside_building(const Vec3& p) const {
  return std::any_of(buildings.begin(), buildings.end(),
                     [&](const AxisAlignedBox& b) { return b.contains(p); });
}

void validate(const ScenarioConfig& cfg) {
  require(cfg.grid.nx >= 1 && cfg.grid.ny >= 1 && cfg.grid.nz >= 1,
          "grid dimensions must be >= 1");
  require((cfg.roi_extent.array() > 0.0).all() && cfg.roi_extent.allFinite(),
          "roi_extent components must be positive");
  require(std::isfinite(cfg.frequency_hz) && cfg.frequency_hz > 0.0, "frequency_hz must be > 0");
  require(std::isfinite(cfg.noise_variance) && cfg.noise_variance >= 0.0,
          "noise_variance must be >= 0");
  require(cfg.antenna_gain_tx > 0.0 && cfg.antenna_gain_rx > 0.0, "antenna gains must be > 0");
  require(cfg.path_loss_exponent >= 1.0, "path_loss_exponent must be >= 1");
  for (std::size_t i = 0; i < cfg.buildings.size(); ++i) {
    const auto& b = cfg.buildings[i];
    require((b.min_corner.array() < b.max_corner.array()).all(),
            "building " + std::to_string(i) + ": min_corner must be < max_corner");
    require(b.min_corner.x() >= 0.0 && b.min_corner.y() >= 0.0 &&
                b.max_corner.x() <= cfg.roi_extent.x() && b.max_corner.y() <= cfg.roi_extent.y(),
            "building " + std::to_string(i) + " leaves the ROI footprint");
  }
  for (std::size_t k = 0; k < cfg.transmitters.size(); ++k) {
    const auto& tx = cfg.transmitters[k];
    require(tx.power_watts > 0.0 && std::isfinite(tx.power_watts),
            "transmitter " + std::to_string(k) + ": power_watts must be > 0");
    require(cfg.inside_roi(tx.position),
            "transmitter " + std::to_string(k) + " at " + vec_str(tx.position) + " is outside the ROI");
  }
}

std::size_t linearize(const GridDims& dims, const GridIndex& idx) {
  require(idx.ix >= 0 && idx.ix < dims.nx && idx.iy >= 0 && idx.iy < dims.ny && idx.iz >= 0 &&
              idx.iz < dims.nz,
          "grid index out of range");
  return static_cast<std::size_t>(idx.ix) +
         static_cast<std::size_t>(dims.nx) *
             (static_cast<std::size_t>(idx.iy) + static_cast<std::size_t>(dims.ny) * idx.iz);
}

GridIndex delinearize(const GridDims& dims, std::size_t n) {
  require(n < dims.count(), "cube index " + std::to_string(n) + " out of range");
  const auto nx = static_cast<std::size_t>(dims.nx);
  const auto ny = static_cast<std::size_t>(dims.ny);
  return {static_cast<int>(n % nx), static_cast<int>((n / nx) % ny), static_cast<int>(n / (nx * ny))};
}

Vec3 cube_center(const ScenarioConfig& cfg, std::size_t n) {
  const GridIndex g = delinearize(cfg.grid, n);
  const Vec3 cell = cfg.cell_size();
  return {(g.ix + 0.5) * cell.x(), (g.iy + 0.5) * cell.y(), (g.iz + 0.5) * cell.z()};
}

std::vector<Vec3> cube_centers(const ScenarioConfig& cfg) {
  std::vector<Vec3> out(cfg.cube_count());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = cube_center(cfg, n);
  return out;
}

std::size_t containing_cube(const ScenarioConfig& cfg, const Vec3& p) {
  if (!cfg.inside_roi(p)) fail(ErrorKind::Domain, "position " + vec_str(p) + " is outside the ROI");
  const Vec3 cell = cfg.cell_size();
  const std::array<int, 3> counts{cfg.grid.nx, cfg.grid.ny, cfg.grid.nz};
  std::array<int, 3> ijk{};
  for (int k = 0; k < 3; ++k) {
    // ceil(x / cell) - 1 puts a point on a shared face into the lower cell.
    const int i = static_cast<int>(std::ceil(p[k] / cell[k])) - 1;
    ijk[k] = std::clamp(i, 0, counts[k] - 1);
  }
  return linearize(cfg.grid, {ijk[0], ijk[1], ijk[2]});
}

Eigen::VectorXd sparse_truth(const ScenarioConfig& cfg) {
  Eigen::VectorXd omega = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cfg.cube_count()));
  for (const auto& tx : cfg.transmitters) {
    omega[static_cast<Eigen::Index>(containing_cube(cfg, tx.position))] += tx.power_watts;
  }
  return omega;
}

double euclidean_distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

double free_space_rss(const ScenarioConfig& cfg, double d, double p_t) {
  if (!(d > 0.0)) fail(ErrorKind::Domain, "free_space_rss: distance must be > 0");
  const double lambda = cfg.wavelength();
  const double four_pi = 4.0 * std::numbers::pi;
  return cfg.antenna_gain_tx * cfg.antenna_gain_rx * lambda * lambda * p_t /
         (four_pi * four_pi * std::pow(d, cfg.path_loss_exponent));
}

double total_rss_at(const ScenarioConfig& cfg, const Vec3& position) {
  double total = 0.0;
  for (const auto& tx : cfg.transmitters) {
    const double d = euclidean_distance(tx.position, position);
    if (d == 0.0) fail(ErrorKind::Domain, "total_rss_at: position coincides with a transmitter");
    total += free_space_rss(cfg, d, tx.power_watts);
  }
  return total;
}

std::vector<Transmitter> random_transmitters(const ScenarioConfig& cfg, int count,
                                             double power_watts, std::mt19937_64& rng) {
  require(count >= 0, "transmitter count must be >= 0");
  std::uniform_real_distribution<double> ux(0.0, cfg.roi_extent.x());
  std::uniform_real_distribution<double> uy(0.0, cfg.roi_extent.y());
  std::uniform_real_distribution<double> uz(0.0, cfg.roi_extent.z());
  std::vector<Transmitter> out;
  out.reserve(static_cast<std::size_t>(count));
  int attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 10000 * (count + 1)) {
      fail(ErrorKind::InvalidArgument, "could not place transmitters outside buildings");
    }
    const Vec3 p{ux(rng), uy(rng), uz(rng)};
    if (cfg.inside_building(p)) continue;
    out.push_back({p, power_watts});
  }
  return out;
}

std::vector<Transmitter> random_grid_transmitters(const ScenarioConfig& cfg, int count, double power_watts,
                                                  std::mt19937_64& rng) {
  require(count >= 0, "transmitter count must be >= 0");
  std::vector<std::size_t> free_cubes;
  for (std::size_t n = 0; n < cfg.cube_count(); ++n)
    if (!cfg.inside_building(cube_center(cfg, n))) free_cubes.push_back(n);
  require(static_cast<std::size_t>(count) <= free_cubes.size(), "more transmitters than free cubes");
  std::vector<Transmitter> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(k), free_cubes.size() - 1);
    std::swap(free_cubes[static_cast<std::size_t>(k)], free_cubes[pick(rng)]);
    out.push_back({cube_center(cfg, free_cubes[static_cast<std::size_t>(k)]), power_watts});
  }
  return out;
}

ScenarioConfig default_scenario() { return ScenarioConfig{}; }

ScenarioConfig box_scenario() {
  ScenarioConfig cfg;
  cfg.buildings = {
      {{22.0, 22.0, 0.0}, {38.0, 44.0, 30.0}},
      {{58.0, 14.0, 0.0}, {78.0, 32.0, 40.0}},
      {{56.0, 62.0, 0.0}, {72.0, 84.0, 24.0}},
      {{14.0, 64.0, 0.0}, {32.0, 78.0, 34.0}},
  };
  cfg.noise_variance = 1e-20;
  return cfg;
}

}  // namespace spectramap
