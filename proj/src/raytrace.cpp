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

#include "raytrace.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "error.hpp"

namespace spectramap {

namespace {

struct Face {
  int axis;      // normal axis
  double coord;  // plane position along axis
  double side;   // +1 when the outward normal points to +axis
  bool bounded;
  Vec3 lo;  // rectangle bounds on the two in-plane axes
  Vec3 hi;
};

bool path_clear(const ScenarioConfig& cfg, const Vec3& a, const Vec3& b) {
  return std::none_of(cfg.buildings.begin(), cfg.buildings.end(),
                      [&](const AxisAlignedBox& box) { return box.blocks_segment(a, b); });
}

std::complex<double> phase(double wave_number, double length) {
  return std::polar(1.0, -wave_number * length);
}

std::vector<Face> reflecting_faces(const ScenarioConfig& cfg, const RtParams& params) {
  std::vector<Face> faces;
  if (params.ground_reflection) {
    faces.push_back({2, 0.0, 1.0, false, Vec3::Zero(), Vec3::Zero()});
  }
  for (const auto& b : cfg.buildings) {
    for (int axis = 0; axis < 3; ++axis) {
      faces.push_back({axis, b.min_corner[axis], -1.0, true, b.min_corner, b.max_corner});
      faces.push_back({axis, b.max_corner[axis], 1.0, true, b.min_corner, b.max_corner});
    }
  }
  return faces;
}

void add_reflections(const ScenarioConfig& cfg, const RtParams& params, double wave_number,
                     const Vec3& m, const Vec3& n, std::vector<RayContribution>& out) {
  for (const Face& f : reflecting_faces(cfg, params)) {
    const double sm = f.side * (m[f.axis] - f.coord);
    const double sn = f.side * (n[f.axis] - f.coord);
    if (sm <= 0.0 || sn <= 0.0) continue;

    Vec3 image = m;
    image[f.axis] = 2.0 * f.coord - m[f.axis];
    const double t = (f.coord - image[f.axis]) / (n[f.axis] - image[f.axis]);
    Vec3 hit = image + t * (n - image);
    hit[f.axis] = f.coord;
    if (f.bounded) {
      bool inside = true;
      for (int k = 0; k < 3; ++k) {
        if (k == f.axis) continue;
        inside = inside && hit[k] >= f.lo[k] && hit[k] <= f.hi[k];
      }
      if (!inside) continue;
    }
    if (!path_clear(cfg, m, hit) || !path_clear(cfg, hit, n)) continue;

    const double length = (m - hit).norm() + (hit - n).norm();
    const double eff = std::max(length, params.reference_distance);
    out.push_back({PathKind::Reflection, {m, hit, n}, length,
                   params.reflection_coeff * phase(wave_number, length) / eff});
  }
}

void add_diffractions(const ScenarioConfig& cfg, const RtParams& params, double wave_number,
                      const Vec3& m, const Vec3& n, std::vector<RayContribution>& out) {
  const double ref = params.reference_distance;
  for (const auto& b : cfg.buildings) {
    const std::array<Eigen::Vector2d, 4> edges{
        Eigen::Vector2d{b.min_corner.x(), b.min_corner.y()},
        Eigen::Vector2d{b.max_corner.x(), b.min_corner.y()},
        Eigen::Vector2d{b.max_corner.x(), b.max_corner.y()},
        Eigen::Vector2d{b.min_corner.x(), b.max_corner.y()}};
    for (const auto& e : edges) {
      const double rm = (m.head<2>() - e).norm();
      const double rn = (n.head<2>() - e).norm();
      if (rm < 1e-12 || rn < 1e-12) continue;
      // Point on the edge with equal incidence and diffraction angles.
      const double z = m.z() + (n.z() - m.z()) * rm / (rm + rn);
      if (z < b.min_corner.z() || z > b.max_corner.z()) continue;
      const Vec3 hit{e.x(), e.y(), z};
      if (!path_clear(cfg, m, hit) || !path_clear(cfg, hit, n)) continue;

      const double d1 = (m - hit).norm();
      const double d2 = (hit - n).norm();
      const double e1 = std::max(d1, ref);
      const double e2 = std::max(d2, ref);
      const double amplitude = 1.0 / std::sqrt(e1 * e2 * (e1 + e2));
      out.push_back({PathKind::Diffraction, {m, hit, n}, d1 + d2,
                     params.diffraction_coeff * amplitude * phase(wave_number, d1 + d2)});
    }
  }
}

}  // namespace

void validate(const RtParams& params) {
  require(std::abs(params.reflection_coeff) <= 1.0, "|reflection_coeff| must be <= 1");
  require(std::abs(params.diffraction_coeff) <= 1.0, "|diffraction_coeff| must be <= 1");
  require(params.max_reflections == 0 || params.max_reflections == 1,
          "max_reflections must be 0 or 1");
  require(params.max_diffractions == 0 || params.max_diffractions == 1,
          "max_diffractions must be 0 or 1");
  require(params.reference_distance > 0.0, "reference_distance must be > 0");
}

std::vector<RayContribution> trace_paths(const ScenarioConfig& cfg, const RtParams& params,
                                         const Vec3& m, const Vec3& n) {
  const double d = euclidean_distance(m, n);
  if (d == 0.0) fail(ErrorKind::Domain, "trace_paths: endpoints coincide");
  const double wave_number = 2.0 * std::numbers::pi / cfg.wavelength();

  std::vector<RayContribution> out;
  if (path_clear(cfg, m, n)) {
    const double eff = std::max(d, params.reference_distance);
    out.push_back({PathKind::Los, {m, n}, d, phase(wave_number, d) / eff});
  }
  if (params.max_reflections > 0) add_reflections(cfg, params, wave_number, m, n, out);
  if (params.max_diffractions > 0) add_diffractions(cfg, params, wave_number, m, n, out);
  return out;
}

std::complex<double> field_superposition(const std::vector<RayContribution>& contributions) {
  std::complex<double> sum{0.0, 0.0};
  for (const auto& c : contributions) sum += c.field;
  return sum;
}

double channel_gain(const ScenarioConfig& cfg, const RtParams& params, const Vec3& m,
                    const Vec3& n) {
  const double lambda = cfg.wavelength();
  const double scale = cfg.antenna_gain_tx * cfg.antenna_gain_rx *
                       std::pow(lambda / (4.0 * std::numbers::pi), 2);
  const double gain = scale * std::norm(field_superposition(trace_paths(cfg, params, m, n)));
  return std::isfinite(gain) ? std::max(gain, kGainFloor) : kGainFloor;
}

double friis_gain(const ScenarioConfig& cfg, double d, double reference_distance) {
  return free_space_rss(cfg, std::max(d, reference_distance), 1.0);
}

}  // namespace spectramap
