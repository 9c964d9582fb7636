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

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "raytrace.hpp"
#include "scenario.hpp"

namespace spectramap {

enum class DictionaryKind : std::uint32_t {
  FullRt = 0,
  SparseRtIdw = 1,
  FreeSpace = 2,
};

// Distance used by the IDW completion between a missing entry (i, j) and an
// anchor (gx, gy).
enum class IdwMetric : std::uint32_t {
  IndexSpace = 0,    // sqrt((i - gx)^2 + (j - gy)^2)
  CubeDistance = 1,  // sqrt(|c_i - c_gx|^2 + |c_j - c_gy|^2), meters
};

struct DictionaryMode {
  DictionaryKind kind = DictionaryKind::FullRt;
  double fraction = 1.0;      // rho, SparseRtIdw only
  double idw_exponent = 2.0;  // p
  std::uint64_t seed = 0;     // anchor selection
  IdwMetric metric = IdwMetric::IndexSpace;
  // 0 interpolates from every anchor. Otherwise the smallest square window
  // around (i, j) holding at least this many anchors is used.
  int idw_neighbors = 0;
};

struct GainDictionary {
  GridDims grid;
  DictionaryMode mode;
  Eigen::MatrixXd gains;                 // linear, row = receiving cube, column = transmitting cube
  std::vector<std::uint8_t> interpolated;  // row-major N*N, 1 where IDW filled the entry
  double diag_convention = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(gains.rows()); }
  bool is_interpolated(std::size_t i, std::size_t j) const { return interpolated[i * size() + j] != 0; }
};

struct IdwAnchor {
  double row;
  double col;
  double value;
};

// Inverse distance weighting of anchor values at (row, col).
// Returns the anchor value exactly when the query coincides with an anchor.
double idw_interpolate(std::span<const IdwAnchor> anchors, double row, double col, double exponent);

GainDictionary build_dictionary(const ScenarioConfig& cfg, const RtParams& params,
                                const DictionaryMode& mode, unsigned jobs = 1);

// Received power per cube from the scenario's transmitters at their exact
// positions, using the ray tracer (or the free-space model).
Eigen::VectorXd ground_truth_map(const ScenarioConfig& cfg, const RtParams& params,
                                 bool free_space = false);

// Self-gain used on the diagonal: free-space gain at the reference distance.
double self_gain(const ScenarioConfig& cfg, const RtParams& params);

}  // namespace spectramap
