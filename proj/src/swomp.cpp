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

#include "swomp.hpp"

#include <algorithm>

#include <Eigen/QR>

#include "error.hpp"
#include "linalg.hpp"

namespace spectramap {

namespace {

Eigen::VectorXd least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& t) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() == a.cols()) return qr.solve(t);
  // Rank deficient: small ridge.
  Eigen::MatrixXd gram = a.transpose() * a;
  gram.diagonal().array() += 1e-10 * gram.trace() / static_cast<double>(gram.rows());
  return gram.ldlt().solve(a.transpose() * t);
}

}  // namespace

SwompResult swomp_solve(const Eigen::MatrixXd& phi, const Eigen::VectorXd& t, const SwompOptions& options) {
  require(options.weak_param > 0.0 && options.weak_param <= 1.0, "swomp: weak_param must be in (0, 1]");
  require(options.max_stages >= 1, "swomp: max_stages must be >= 1");
  require(phi.rows() == t.size(), "swomp: dimension mismatch");

  SwompResult out;
  out.omega = Eigen::VectorXd::Zero(phi.cols());
  const double t_norm = t.norm();
  if (t_norm == 0.0) return out;

  const Eigen::VectorXd col_norm = usable_column_norms(phi);
  std::vector<char> in_support(static_cast<std::size_t>(phi.cols()), 0);
  Eigen::VectorXd residual = t;
  Eigen::VectorXd coeffs;

  for (int stage = 0; stage < options.max_stages; ++stage) {
    if (residual.norm() <= options.residual_tol * t_norm) break;
    if (out.support.size() >= static_cast<std::size_t>(phi.rows())) break;
    Eigen::VectorXd corr = (phi.transpose() * residual).cwiseAbs();
    for (Eigen::Index j = 0; j < corr.size(); ++j) {
      corr[j] = (col_norm[j] > 0.0 && !in_support[static_cast<std::size_t>(j)]) ? corr[j] / col_norm[j] : 0.0;
    }
    const double peak = corr.maxCoeff();
    if (!(peak > 0.0)) break;
    for (Eigen::Index j = 0; j < corr.size(); ++j) {
      if (corr[j] >= options.weak_param * peak) {
        in_support[static_cast<std::size_t>(j)] = 1;
        out.support.push_back(static_cast<std::size_t>(j));
      }
    }
    Eigen::MatrixXd sub(phi.rows(), static_cast<Eigen::Index>(out.support.size()));
    for (std::size_t k = 0; k < out.support.size(); ++k)
      sub.col(static_cast<Eigen::Index>(k)) = phi.col(static_cast<Eigen::Index>(out.support[k]));
    coeffs = least_squares(sub, t);
    residual = t - sub * coeffs;
    out.residual_norms.push_back(residual.norm());
    out.stages = stage + 1;
  }

  for (std::size_t k = 0; k < out.support.size(); ++k) {
    const double v = coeffs[static_cast<Eigen::Index>(k)];
    out.omega[static_cast<Eigen::Index>(out.support[k])] = options.nonnegative ? std::max(v, 0.0) : v;
  }
  std::sort(out.support.begin(), out.support.end());
  return out;
}

}  // namespace spectramap
