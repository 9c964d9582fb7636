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

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "error.hpp"

namespace spectramap {

// ln det of a symmetric positive definite matrix via Cholesky.
inline double log_det_spd(const Eigen::MatrixXd& a, const char* what = "matrix") {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    fail(ErrorKind::Numerical, std::string(what) + " is not positive definite");
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

inline double log_det_spd(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

// Columns with norm below this fraction of the largest column norm carry
// nothing but floor-level gains and are treated as empty.
inline constexpr double kNegligibleColumn = 1e-9;

// Column norms with negligible columns reported as zero.
inline Eigen::VectorXd usable_column_norms(const Eigen::MatrixXd& a) {
  Eigen::VectorXd norms = a.colwise().norm().transpose();
  if (norms.size() == 0) return norms;
  const double cutoff = kNegligibleColumn * norms.maxCoeff();
  for (Eigen::Index j = 0; j < norms.size(); ++j)
    if (norms[j] <= cutoff) norms[j] = 0.0;
  return norms;
}

}  // namespace spectramap
