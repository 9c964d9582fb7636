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
#include <string>
#include <vector>

#include <Eigen/Core>

namespace spectramap {

struct PruneMode {
  enum class Kind { Fixed, Adaptive };
  Kind kind = Kind::Adaptive;
  double threshold = 0.0;  // Fixed: keep alpha_i^-1 > threshold

  static PruneMode fixed(double value) { return {Kind::Fixed, value}; }
  static PruneMode adaptive() { return {Kind::Adaptive, 0.0}; }
};

struct SblHyperparams {
  // Gamma hyperpriors: a, b on each alpha_i and c, d on beta.
  double a = 1e-4;
  double b = 1e-4;
  double c = 1e-4;
  double d = 1e-4;
  int max_iters = 1000;
  double convergence_tol = 1e-4;
  PruneMode prune = PruneMode::adaptive();
  // Upper clamp for alpha when its update denominator vanishes.
  double alpha_max = 1e12;
};

void validate(const SblHyperparams& hyper);

struct GaussianPosterior {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
};

struct SblPosterior {
  Eigen::VectorXd mu;     // length N, zero at pruned positions
  Eigen::MatrixXd sigma;  // N x N, zero rows/columns at pruned positions
  Eigen::VectorXd alpha;  // length N, +inf at pruned positions
  double beta = 0.0;
  std::vector<std::size_t> active_set;
  // L(alpha, beta) of the normalized problem, one entry per EM iteration
  // plus the final state.
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

// Sigma = (beta Phi^T Phi + Lambda)^-1, mu = beta Sigma Phi^T t.
GaussianPosterior posterior_update(const Eigen::MatrixXd& phi, const Eigen::VectorXd& t,
                                   const Eigen::VectorXd& alpha, double beta);

// -1/2 (ln|C| + t^T C^-1 t) + sum(a ln alpha_i - b alpha_i) + c ln beta - d beta
// with C = beta^-1 I + Phi Lambda^-1 Phi^T.
double marginal_objective(const Eigen::MatrixXd& phi, const Eigen::VectorXd& t,
                          const Eigen::VectorXd& alpha, double beta, const SblHyperparams& hyper);

// alpha_i = (1 + 2a) / (mu_i^2 + Sigma_ii + 2b)
Eigen::VectorXd alpha_update(const Eigen::VectorXd& mu, const Eigen::VectorXd& sigma_diag,
                             const SblHyperparams& hyper);

// beta = (M + 2c) / (|t - Phi mu|^2 + beta_old^-1 sum_i (1 - alpha_i Sigma_ii) + 2d).
// alpha must be the precision vector that produced Sigma.
double beta_update(const Eigen::VectorXd& t, const Eigen::MatrixXd& phi, const Eigen::VectorXd& mu,
                   const Eigen::VectorXd& sigma_diag, const Eigen::VectorXd& alpha, double beta_old,
                   const SblHyperparams& hyper, std::vector<std::string>* warnings = nullptr);

// The expected complete-data terms each update maximizes; exposed so the
// updates can be checked for stationarity.
double alpha_surrogate(const Eigen::VectorXd& alpha, const Eigen::VectorXd& mu,
                       const Eigen::VectorXd& sigma_diag, const SblHyperparams& hyper);
double beta_surrogate(double beta, double expected_residual, std::size_t m, const SblHyperparams& hyper);
// E|t - Phi w|^2 under N(mu, Sigma): |t - Phi mu|^2 + tr(Sigma Phi^T Phi).
double expected_residual(const Eigen::VectorXd& t, const Eigen::MatrixXd& phi, const GaussianPosterior& post);

// Positions (into `candidates`) that survive pruning. alpha has one entry
// per candidate. Never empty: when everything would be pruned the entry with
// the largest alpha^-1 is kept and a warning is recorded.
std::vector<std::size_t> prune(const Eigen::VectorXd& alpha, const PruneMode& mode,
                               std::vector<std::string>* warnings = nullptr);

// EM sparse Bayesian learning. The problem is solved with unit-norm columns
// and unit-RMS measurements, so the hyperprior constants are scale free;
// the returned posterior is mapped back to the caller's units.
SblPosterior sbl_solve(const Eigen::MatrixXd& phi, const Eigen::VectorXd& t, const SblHyperparams& hyper);

// Differential entropy of N(., Sigma): N/2 (ln 2 pi + 1) + 1/2 ln|Sigma|.
double gaussian_entropy(const Eigen::MatrixXd& sigma);

}  // namespace spectramap
