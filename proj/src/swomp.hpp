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
#include <vector>

#include <Eigen/Core>

namespace spectramap {

struct SwompOptions {
  double weak_param = 0.5;          // select columns with |corr| >= weak_param * max |corr|
  int max_stages = 50;
  double residual_tol = 1e-6;       // stop when |r| <= residual_tol * |t|
  bool nonnegative = true;          // clamp the final coefficients at zero
};

struct SwompResult {
  Eigen::VectorXd omega;
  std::vector<std::size_t> support;
  std::vector<double> residual_norms;  // after each stage
  int stages = 0;
};

// Stagewise weak orthogonal matching pursuit. Correlations use unit-norm
// columns; every stage refits all selected columns by least squares.
SwompResult swomp_solve(const Eigen::MatrixXd& phi, const Eigen::VectorXd& t, const SwompOptions& options = {});

}  // namespace spectramap
