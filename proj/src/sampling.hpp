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

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace spectramap {

enum class SamplingMethod { Random, Mmi };

struct SamplingPlan {
  SamplingMethod method = SamplingMethod::Random;
  std::uint64_t seed = 0;
  std::size_t cube_count = 0;            // N
  std::vector<std::size_t> indices;      // ordered, distinct
  std::vector<double> log_det_trace;     // MMI only: ln det(Phi_t Phi_t^T + eps I) after each pick

  std::size_t size() const { return indices.size(); }
  double rate() const { return cube_count ? static_cast<double>(indices.size()) / cube_count : 0.0; }
};

struct MeasurementVector {
  Eigen::VectorXd values;  // watts
  double noise_variance = 0.0;
};

void validate(const SamplingPlan& plan);

SamplingPlan random_plan(std::size_t n, std::size_t m, std::uint64_t seed);

// Rows of the dictionary selected by the plan, i.e. Phi = psi * phi.
Eigen::MatrixXd sensing_matrix(const Eigen::MatrixXd& dictionary, const SamplingPlan& plan);

// Ridge added to Gram matrices: 1e-10 * trace(A A^T) / rows(A).
double gram_ridge(const Eigen::MatrixXd& rows);

// ln det(Phi Phi^T + eps I) with Phi = psi * phi and eps = gram_ridge(Phi).
double mmi_objective(const Eigen::MatrixXd& dictionary, const SamplingPlan& plan);

// Greedy log-det maximization. Each step adds the row with the largest
// Schur complement against the rows already chosen, which is the factor
// by which det(Phi_t Phi_t^T) grows. The first pick is the row of largest
// energy; ties go to the lowest index.
SamplingPlan greedy_mmi_plan(const Eigen::MatrixXd& dictionary, std::size_t m);

MeasurementVector measure(const Eigen::VectorXd& x_true, const SamplingPlan& plan,
                          double noise_variance, std::uint64_t seed);

// I(omega; t) = 1/2 ln det(Lambda^-1 (beta Phi^T Phi + Lambda)) for the
// Gaussian prior omega ~ N(0, Lambda^-1) and noise precision beta.
double mutual_information(const Eigen::MatrixXd& phi, const Eigen::VectorXd& alpha, double beta);

}  // namespace spectramap
