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

#include <complex>
#include <numbers>
#include <vector>

#include "scenario.hpp"

namespace spectramap {

inline constexpr double kGainFloor = 1e-15;

struct RtParams {
  std::complex<double> reflection_coeff = std::polar(0.6, std::numbers::pi);
  std::complex<double> diffraction_coeff = std::polar(0.1, 0.0);
  int max_reflections = 1;   // 0 or 1
  int max_diffractions = 1;  // 0 or 1
  double reference_distance = 1.0;
  bool ground_reflection = true;
};

void validate(const RtParams& params);

enum class PathKind { Los, Reflection, Diffraction };

struct RayContribution {
  PathKind kind = PathKind::Los;
  std::vector<Vec3> path_nodes;  // m, [h], n
  double path_length = 0.0;
  std::complex<double> field;  // relative to the 1 m reference field
};

// All single-interaction paths from m to n: the direct ray when unobstructed,
// one specular image-method reflection per visible building face and the
// ground plane, and one diffraction per illuminated vertical building edge.
std::vector<RayContribution> trace_paths(const ScenarioConfig& cfg, const RtParams& params,
                                         const Vec3& m, const Vec3& n);

// Coherent sum of the path fields. Empty input sums to zero; the gain floor
// is applied by channel_gain.
std::complex<double> field_superposition(const std::vector<RayContribution>& contributions);

// Linear power gain G_t G_r (lambda / 4 pi)^2 |E_n / E_1m|^2, floored at kGainFloor.
double channel_gain(const ScenarioConfig& cfg, const RtParams& params, const Vec3& m, const Vec3& n);

// Free-space gain with the scenario's exponent; d is clamped to reference_distance.
double friis_gain(const ScenarioConfig& cfg, double d, double reference_distance = 1.0);

inline double gain_to_db(double gain) { return 10.0 * std::log10(gain); }
inline double path_loss_db(double gain) { return -gain_to_db(gain); }

}  // namespace spectramap
