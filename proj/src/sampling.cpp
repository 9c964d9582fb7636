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

#include "sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include "error.hpp"
#include "linalg.hpp"

namespace spectramap {

void validate(const SamplingPlan& plan) {
  require(!plan.indices.empty(), "sampling plan is empty");
  std::unordered_set<std::size_t> seen;
  for (std::size_t i : plan.indices) {
    require(i < plan.cube_count, "sampling plan index " + std::to_string(i) + " out of range");
    require(seen.insert(i).second, "sampling plan repeats index " + std::to_string(i));
  }
}

SamplingPlan random_plan(std::size_t n, std::size_t m, std::uint64_t seed) {
  require(m >= 1 && m <= n, "random_plan: need 1 <= M <= N");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(m);
  return {SamplingMethod::Random, seed, n, std::move(pool), {}};
}

Eigen::MatrixXd sensing_matrix(const Eigen::MatrixXd& dictionary, const SamplingPlan& plan) {
  Eigen::MatrixXd phi(static_cast<Eigen::Index>(plan.size()), dictionary.cols());
  for (std::size_t r = 0; r < plan.size(); ++r) {
    require(plan.indices[r] < static_cast<std::size_t>(dictionary.rows()), "plan index outside dictionary");
    phi.row(static_cast<Eigen::Index>(r)) = dictionary.row(static_cast<Eigen::Index>(plan.indices[r]));
  }
  return phi;
}

double gram_ridge(const Eigen::MatrixXd& rows) {
  if (rows.rows() == 0) return 0.0;
  return 1e-10 * rows.squaredNorm() / static_cast<double>(rows.rows());
}

double mmi_objective(const Eigen::MatrixXd& dictionary, const SamplingPlan& plan) {
  if (!dictionary.allFinite()) fail(ErrorKind::Numerical, "mmi_objective: non-finite dictionary");
  const Eigen::MatrixXd phi = sensing_matrix(dictionary, plan);
  Eigen::MatrixXd gram = phi * phi.transpose();
  gram.diagonal().array() += gram_ridge(phi);
  return log_det_spd(gram, "sensing Gram matrix");
}

SamplingPlan greedy_mmi_plan(const Eigen::MatrixXd& dictionary, std::size_t m) {
  const auto n = static_cast<std::size_t>(dictionary.rows());
  require(m >= 1 && m <= n, "greedy_mmi_plan: need 1 <= M <= N");
  if (!dictionary.allFinite()) fail(ErrorKind::Numerical, "greedy_mmi_plan: non-finite dictionary");

  const auto ni = static_cast<Eigen::Index>(n);
  const double ridge = gram_ridge(dictionary);
  // Pivoted Cholesky of phi phi^T + ridge I. Row i of `factor` holds
  // L^{-1} k_i restricted to the chosen pivots, and `score` the Schur
  // complement k_ii - |factor_i|^2.
  Eigen::VectorXd score = dictionary.rowwise().squaredNorm().array() + ridge;
  Eigen::MatrixXd factor = Eigen::MatrixXd::Zero(ni, static_cast<Eigen::Index>(m));
  std::vector<char> taken(n, 0);

  SamplingPlan plan{SamplingMethod::Mmi, 0, n, {}, {}};
  plan.indices.reserve(m);
  double log_det = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      if (best == n || score[static_cast<Eigen::Index>(i)] > score[static_cast<Eigen::Index>(best)]) best = i;
    }
    const auto b = static_cast<Eigen::Index>(best);
    const double pivot = std::max(score[b], ridge);
    taken[best] = 1;
    plan.indices.push_back(best);
    log_det += std::log(pivot);
    plan.log_det_trace.push_back(log_det);
    if (t + 1 == m) break;

    const auto ti = static_cast<Eigen::Index>(t);
    const double root = std::sqrt(pivot);
    Eigen::VectorXd k = dictionary * dictionary.row(b).transpose();
    k[b] += ridge;
    Eigen::VectorXd col = (k - factor.leftCols(ti) * factor.row(b).head(ti).transpose()) / root;
    factor.col(ti) = col;
    score.array() -= col.array().square();
  }
  return plan;
}

MeasurementVector measure(const Eigen::VectorXd& x_true, const SamplingPlan& plan,
                          double noise_variance, std::uint64_t seed) {
  require(noise_variance >= 0.0, "measure: noise variance must be >= 0");
  require(plan.cube_count == static_cast<std::size_t>(x_true.size()), "measure: plan/map size mismatch");
  MeasurementVector out;
  out.noise_variance = noise_variance;
  out.values.resize(static_cast<Eigen::Index>(plan.size()));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> standard(0.0, 1.0);
  const double sigma = std::sqrt(noise_variance);
  for (std::size_t i = 0; i < plan.size(); ++i) {
    double v = x_true[static_cast<Eigen::Index>(plan.indices[i])];
    if (sigma > 0.0) v += sigma * standard(rng);
    out.values[static_cast<Eigen::Index>(i)] = v;
  }
  return out;
}

double mutual_information(const Eigen::MatrixXd& phi, const Eigen::VectorXd& alpha, double beta) {
  require(phi.cols() == alpha.size(), "mutual_information: dimension mismatch");
  require((alpha.array() > 0.0).all() && beta > 0.0, "mutual_information: alpha and beta must be > 0");
  // det(Lambda^-1 (beta Phi^T Phi + Lambda)) = det(I_M + beta Phi Lambda^-1 Phi^T)
  Eigen::MatrixXd inner = beta * phi * alpha.cwiseInverse().asDiagonal() * phi.transpose();
  inner.diagonal().array() += 1.0;
  return 0.5 * log_det_spd(inner, "I + beta Phi Lambda^-1 Phi^T");
}

}  // namespace spectramap
