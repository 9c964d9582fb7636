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

#include "dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "error.hpp"
#include "parallel.hpp"

namespace spectramap {

namespace {

Eigen::MatrixXd full_rt_gains(const ScenarioConfig& cfg, const RtParams& params,
                              const std::vector<Vec3>& centers, double diag, unsigned jobs) {
  const auto n = static_cast<Eigen::Index>(centers.size());
  Eigen::MatrixXd g(n, n);
  parallel_for(centers.size(), jobs, [&](std::size_t i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (Eigen::Index c = 0; c < n; ++c) {
      g(r, c) = (r == c) ? diag : channel_gain(cfg, params, centers[static_cast<std::size_t>(c)], centers[i]);
    }
  });
  // Reciprocity holds up to rounding; average the two directions.
  Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
  sym.diagonal().setConstant(diag);
  return sym;
}

Eigen::MatrixXd free_space_gains(const ScenarioConfig& cfg, const RtParams& params,
                                 const std::vector<Vec3>& centers, double diag) {
  const auto n = static_cast<Eigen::Index>(centers.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = diag;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = euclidean_distance(centers[static_cast<std::size_t>(i)], centers[static_cast<std::size_t>(j)]);
      g(i, j) = g(j, i) = std::max(friis_gain(cfg, d, params.reference_distance), kGainFloor);
    }
  }
  return g;
}

// Symmetric anchor mask over off-diagonal entries: the first off-diagonal
// band, a stratified draw per column, then uniform pairs up to rho * N^2.
std::vector<std::uint8_t> choose_anchors(std::size_t n, double rho, std::uint64_t seed) {
  std::vector<std::uint8_t> mask(n * n, 0);
  std::size_t count = n;  // the diagonal is fixed by convention
  auto mark = [&](std::size_t i, std::size_t j) {
    if (i == j || mask[i * n + j]) return;
    mask[i * n + j] = mask[j * n + i] = 1;
    count += 2;
  };
  for (std::size_t i = 0; i + 1 < n; ++i) mark(i, i + 1);

  std::mt19937_64 rng(seed);
  const auto target = static_cast<std::size_t>(std::ceil(rho * static_cast<double>(n) * static_cast<double>(n)));
  const std::size_t strata = std::max<std::size_t>(1, static_cast<std::size_t>(rho * static_cast<double>(n) / 2.0));
  for (std::size_t j = 0; j < n && count < target; ++j) {
    for (std::size_t s = 0; s < strata; ++s) {
      const std::size_t lo = s * n / strata;
      const std::size_t hi = (s + 1) * n / strata;
      std::uniform_int_distribution<std::size_t> pick(lo, hi - 1);
      mark(pick(rng), j);
    }
  }
  if (count < target) {
    std::vector<std::size_t> free_pairs;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (!mask[i * n + j]) free_pairs.push_back(i * n + j);
    std::shuffle(free_pairs.begin(), free_pairs.end(), rng);
    for (std::size_t k = 0; k < free_pairs.size() && count < target; ++k) {
      mark(free_pairs[k] / n, free_pairs[k] % n);
    }
  }
  return mask;
}

}  // namespace

double idw_interpolate(std::span<const IdwAnchor> anchors, double row, double col, double exponent) {
  require(!anchors.empty(), "idw_interpolate: no anchors");
  double num = 0.0;
  double den = 0.0;
  for (const auto& a : anchors) {
    const double d = std::hypot(row - a.row, col - a.col);
    if (d == 0.0) return a.value;
    const double w = std::pow(d, -exponent);
    num += w * a.value;
    den += w;
  }
  return num / den;
}

double self_gain(const ScenarioConfig& cfg, const RtParams& params) {
  return friis_gain(cfg, params.reference_distance, params.reference_distance);
}

GainDictionary build_dictionary(const ScenarioConfig& cfg, const RtParams& params,
                                const DictionaryMode& mode, unsigned jobs) {
  validate(cfg);
  validate(params);
  const std::size_t n = cfg.cube_count();
  require(n >= 2, "build_dictionary: need at least two cubes");

  GainDictionary dict;
  dict.grid = cfg.grid;
  dict.mode = mode;
  dict.diag_convention = self_gain(cfg, params);
  dict.interpolated.assign(n * n, 0);
  const auto centers = cube_centers(cfg);

  switch (mode.kind) {
    case DictionaryKind::FullRt:
      dict.gains = full_rt_gains(cfg, params, centers, dict.diag_convention, jobs);
      return dict;
    case DictionaryKind::FreeSpace:
      dict.gains = free_space_gains(cfg, params, centers, dict.diag_convention);
      return dict;
    case DictionaryKind::SparseRtIdw:
      break;
  }

  require(mode.fraction > 0.0 && mode.fraction <= 1.0, "IDW fraction must be in (0, 1]");
  require(mode.idw_exponent > 0.0, "IDW exponent must be > 0");
  require(mode.idw_neighbors >= 0, "idw_neighbors must be >= 0");
  if (mode.fraction * static_cast<double>(n) * static_cast<double>(n) < static_cast<double>(n)) {
    fail(ErrorKind::InvalidArgument, "IDW fraction leaves fewer than N anchors");
  }

  const auto mask = choose_anchors(n, mode.fraction, mode.seed);
  const auto ni = static_cast<Eigen::Index>(n);
  dict.gains = Eigen::MatrixXd::Constant(ni, ni, 0.0);
  dict.gains.diagonal().setConstant(dict.diag_convention);

  // Ray trace the anchors (upper triangle, mirrored).
  parallel_for(n, jobs, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!mask[i * n + j]) continue;
      const double g = 0.5 * (channel_gain(cfg, params, centers[j], centers[i]) +
                              channel_gain(cfg, params, centers[i], centers[j]));
      dict.gains(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g;
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (mask[i * n + j])
        dict.gains(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
            dict.gains(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));

  // Anchor coordinates in the chosen metric space. Cube distance embeds
  // (i, j) as the 6-vector (c_i, c_j); index space is the plane (i, j).
  auto anchor_distance = [&](std::size_t i, std::size_t j, std::size_t gi, std::size_t gj) {
    if (mode.metric == IdwMetric::IndexSpace) {
      return std::hypot(static_cast<double>(i) - static_cast<double>(gi),
                        static_cast<double>(j) - static_cast<double>(gj));
    }
    return std::sqrt((centers[i] - centers[gi]).squaredNorm() + (centers[j] - centers[gj]).squaredNorm());
  };

  std::vector<std::size_t> anchor_list;
  for (std::size_t k = 0; k < n * n; ++k)
    if (mask[k]) anchor_list.push_back(k);

  auto interpolate = [&](std::size_t i, std::size_t j, std::span<const std::size_t> sources) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k : sources) {
      const std::size_t gi = k / n;
      const std::size_t gj = k % n;
      const double d = anchor_distance(i, j, gi, gj);
      const double value = gain_to_db(dict.gains(static_cast<Eigen::Index>(gi), static_cast<Eigen::Index>(gj)));
      if (d == 0.0) return value;
      const double w = std::pow(d, -mode.idw_exponent);
      num += w * value;
      den += w;
    }
    return num / den;
  };

  parallel_for(n, jobs, [&](std::size_t i) {
    std::vector<std::size_t> window;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || mask[i * n + j]) continue;
      double db = 0.0;
      if (mode.idw_neighbors == 0) {
        db = interpolate(i, j, anchor_list);
      } else {
        const auto need = static_cast<std::size_t>(mode.idw_neighbors);
        const long ii = static_cast<long>(i);
        const long jj = static_cast<long>(j);
        const long last = static_cast<long>(n) - 1;
        for (long r = 1;; ++r) {
          window.clear();
          for (long a = std::max(0L, ii - r); a <= std::min(last, ii + r); ++a)
            for (long b = std::max(0L, jj - r); b <= std::min(last, jj + r); ++b) {
              const auto k = static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b);
              if (mask[k]) window.push_back(k);
            }
          if (window.size() >= need || (ii - r <= 0 && jj - r <= 0 && ii + r >= last && jj + r >= last)) break;
        }
        db = interpolate(i, j, window);
      }
      dict.gains(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::pow(10.0, db / 10.0);
      dict.interpolated[i * n + j] = 1;
    }
  });
  return dict;
}

Eigen::VectorXd ground_truth_map(const ScenarioConfig& cfg, const RtParams& params, bool free_space) {
  validate(cfg);
  const auto centers = cube_centers(cfg);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(centers.size()));
  for (const auto& tx : cfg.transmitters) {
    for (std::size_t n = 0; n < centers.size(); ++n) {
      const double d = euclidean_distance(tx.position, centers[n]);
      double g = 0.0;
      if (free_space || d < 1e-12) {
        g = friis_gain(cfg, d, params.reference_distance);
      } else {
        g = channel_gain(cfg, params, tx.position, centers[n]);
      }
      x[static_cast<Eigen::Index>(n)] += tx.power_watts * g;
    }
  }
  return x;
}

}  // namespace spectramap
