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

#include "sbl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "error.hpp"
#include "linalg.hpp"

namespace spectramap {

namespace {

// Posterior mean, diagonal covariance and the pieces of the log evidence,
// computed in whichever of the N x N or M x M forms is smaller.
struct PosteriorDiag {
  Eigen::VectorXd mu;
  Eigen::VectorXd sigma_diag;
  double log_det_c = 0.0;
  double quad = 0.0;  // t^T C^-1 t
};

PosteriorDiag posterior_diag(const Eigen::MatrixXd& phi, const Eigen::VectorXd& t,
                             const Eigen::VectorXd& alpha, double beta) {
  const Eigen::Index m = phi.rows();
  const Eigen::Index n = phi.cols();
  PosteriorDiag out;
  if (n > m) {
    const Eigen::VectorXd gamma = alpha.cwiseInverse();
    Eigen::MatrixXd w = phi * gamma.cwiseSqrt().asDiagonal();  // M x N
    Eigen::MatrixXd c = Eigen::MatrixXd::Identity(m, m) / beta;
    c.selfadjointView<Eigen::Lower>().rankUpdate(w);
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() != Eigen::Success) fail(ErrorKind::Numerical, "marginal covariance C is not positive definite");
    const Eigen::VectorXd z = llt.solve(t);
    out.mu = gamma.asDiagonal() * (phi.transpose() * z);
    llt.matrixL().solveInPlace(w);
    out.sigma_diag = gamma - gamma.cwiseProduct(w.colwise().squaredNorm().transpose());
    out.log_det_c = log_det_spd(llt);
    out.quad = t.dot(z);
  } else {
    Eigen::MatrixXd s = beta * phi.transpose() * phi;
    s.diagonal() += alpha;
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    if (llt.info() != Eigen::Success) fail(ErrorKind::Numerical, "posterior precision is not positive definite");
    const Eigen::VectorXd phit_t = phi.transpose() * t;
    out.mu = beta * llt.solve(phit_t);
    const Eigen::MatrixXd linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
    out.sigma_diag = linv.colwise().squaredNorm().transpose();
    out.log_det_c = -static_cast<double>(m) * std::log(beta) - alpha.array().log().sum() + log_det_spd(llt);
    out.quad = beta * t.squaredNorm() - beta * phit_t.dot(out.mu);
  }
  return out;
}

double hyperprior_terms(const Eigen::VectorXd& alpha, double beta, const SblHyperparams& h) {
  return (h.a * alpha.array().log() - h.b * alpha.array()).sum() + h.c * std::log(beta) - h.d * beta;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& phi, const std::vector<std::size_t>& cols) {
  Eigen::MatrixXd out(phi.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = phi.col(static_cast<Eigen::Index>(cols[k]));
  return out;
}

Eigen::VectorXd select(const Eigen::VectorXd& v, const std::vector<std::size_t>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out[static_cast<Eigen::Index>(k)] = v[static_cast<Eigen::Index>(idx[k])];
  return out;
}

}  // namespace

void validate(const SblHyperparams& h) {
  require(h.a >= 0.0 && h.b >= 0.0 && h.c >= 0.0 && h.d >= 0.0, "hyperprior constants must be >= 0");
  require(h.max_iters >= 1, "max_iters must be >= 1");
  require(h.convergence_tol > 0.0, "convergence_tol must be > 0");
  require(h.alpha_max > 0.0, "alpha_max must be > 0");
}

GaussianPosterior posterior_update(const Eigen::MatrixXd& phi, const Eigen::VectorXd& t,
                                   const Eigen::VectorXd& alpha, double beta) {
  require(phi.rows() == t.size() && phi.cols() == alpha.size(), "posterior_update: dimension mismatch");
  require((alpha.array() > 0.0).all() && beta > 0.0, "posterior_update: alpha and beta must be > 0");
  Eigen::MatrixXd precision = beta * phi.transpose() * phi;
  precision.diagonal() += alpha;
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(precision);
    const auto& sv = svd.singularValues();
    fail(ErrorKind::Numerical, "posterior precision is not positive definite (condition estimate " +
                                   std::to_string(sv[0] / sv[sv.size() - 1]) + ")");
  }
  GaussianPosterior post;
  post.sigma = llt.solve(Eigen::MatrixXd::Identity(phi.cols(), phi.cols()));
  post.sigma = 0.5 * (post.sigma + post.sigma.transpose());
  post.mu = beta * (post.sigma * (phi.transpose() * t));
  return post;
}

double marginal_objective(const Eigen::MatrixXd& phi, const Eigen::VectorXd& t,
                          const Eigen::VectorXd& alpha, double beta, const SblHyperparams& hyper) {
  require(phi.rows() == t.size() && phi.cols() == alpha.size(), "marginal_objective: dimension mismatch");
  Eigen::MatrixXd c = phi * alpha.cwiseInverse().asDiagonal() * phi.transpose();
  c.diagonal().array() += 1.0 / beta;
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() != Eigen::Success) fail(ErrorKind::Numerical, "marginal covariance C is not positive definite");
  return -0.5 * (log_det_spd(llt) + t.dot(llt.solve(t))) + hyperprior_terms(alpha, beta, hyper);
}

Eigen::VectorXd alpha_update(const Eigen::VectorXd& mu, const Eigen::VectorXd& sigma_diag,
                             const SblHyperparams& hyper) {
  require(mu.size() == sigma_diag.size(), "alpha_update: dimension mismatch");
  Eigen::VectorXd out(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double den = mu[i] * mu[i] + sigma_diag[i] + 2.0 * hyper.b;
    out[i] = den > 0.0 ? std::min((1.0 + 2.0 * hyper.a) / den, hyper.alpha_max) : hyper.alpha_max;
  }
  return out;
}

double beta_update(const Eigen::VectorXd& t, const Eigen::MatrixXd& phi, const Eigen::VectorXd& mu,
                   const Eigen::VectorXd& sigma_diag, const Eigen::VectorXd& alpha, double beta_old,
                   const SblHyperparams& hyper, std::vector<std::string>* warnings) {
  require(beta_old > 0.0, "beta_update: beta_old must be > 0");
  const double residual = (t - phi * mu).squaredNorm();
  const double spread = (1.0 - (alpha.array() * sigma_diag.array())).sum() / beta_old;
  double den = residual + spread + 2.0 * hyper.d;
  if (!(den > 0.0)) {
    if (warnings) warnings->push_back("beta_update: non-positive denominator clamped");
    den = std::numeric_limits<double>::min();
  }
  return (static_cast<double>(t.size()) + 2.0 * hyper.c) / den;
}

double alpha_surrogate(const Eigen::VectorXd& alpha, const Eigen::VectorXd& mu,
                       const Eigen::VectorXd& sigma_diag, const SblHyperparams& hyper) {
  const Eigen::ArrayXd second = mu.array().square() + sigma_diag.array();
  return (-0.5 * (-alpha.array().log() + alpha.array() * second) + hyper.a * alpha.array().log() -
          hyper.b * alpha.array())
      .sum();
}

double beta_surrogate(double beta, double residual, std::size_t m, const SblHyperparams& hyper) {
  return 0.5 * (static_cast<double>(m) * std::log(beta) - beta * residual) + hyper.c * std::log(beta) -
         hyper.d * beta;
}

double expected_residual(const Eigen::VectorXd& t, const Eigen::MatrixXd& phi, const GaussianPosterior& post) {
  return (t - phi * post.mu).squaredNorm() + (post.sigma * (phi.transpose() * phi)).trace();
}

std::vector<std::size_t> prune(const Eigen::VectorXd& alpha, const PruneMode& mode,
                               std::vector<std::string>* warnings) {
  require(alpha.size() > 0, "prune: empty alpha");
  const Eigen::ArrayXd gamma = alpha.array().inverse();
  double threshold = mode.threshold;
  if (mode.kind == PruneMode::Kind::Adaptive) {
    const double mean = gamma.mean();
    const double var = (gamma - mean).square().mean();
    threshold = mean - std::sqrt(var);
  }
  std::vector<std::size_t> keep;
  for (Eigen::Index i = 0; i < gamma.size(); ++i)
    if (gamma[i] > threshold) keep.push_back(static_cast<std::size_t>(i));
  if (keep.empty()) {
    Eigen::Index best = 0;
    gamma.maxCoeff(&best);
    keep.push_back(static_cast<std::size_t>(best));
    if (warnings) warnings->push_back("prune: every coefficient fell below the threshold; kept the largest");
  }
  return keep;
}

SblPosterior sbl_solve(const Eigen::MatrixXd& phi, const Eigen::VectorXd& t, const SblHyperparams& hyper) {
  validate(hyper);
  const Eigen::Index m = phi.rows();
  const Eigen::Index n = phi.cols();
  require(m >= 1 && n >= 1 && t.size() == m, "sbl_solve: dimension mismatch");
  if (!phi.allFinite() || !t.allFinite()) fail(ErrorKind::Numerical, "sbl_solve: non-finite input");

  const double inf = std::numeric_limits<double>::infinity();
  SblPosterior out;
  out.mu = Eigen::VectorXd::Zero(n);
  out.sigma = Eigen::MatrixXd::Zero(n, n);
  out.alpha = Eigen::VectorXd::Constant(n, inf);

  // Normalize: unit-norm columns and unit-RMS data.
  const Eigen::VectorXd col_norm = usable_column_norms(phi);
  const double t_scale = t.norm() / std::sqrt(static_cast<double>(m));
  if (!std::isfinite(t_scale)) fail(ErrorKind::Numerical, "sbl_solve: measurement norm overflows");
  std::vector<std::size_t> active;
  for (Eigen::Index j = 0; j < n; ++j)
    if (col_norm[j] > 0.0) active.push_back(static_cast<std::size_t>(j));
  if (t_scale == 0.0 || active.empty()) {
    // Nothing to explain: the posterior mean is zero.
    out.alpha.setOnes();
    for (Eigen::Index j = 0; j < n; ++j) out.active_set.push_back(static_cast<std::size_t>(j));
    out.sigma = Eigen::MatrixXd::Identity(n, n);
    out.beta = 1.0;
    out.converged = true;
    return out;
  }
  Eigen::MatrixXd phi_n = phi;
  for (Eigen::Index j = 0; j < n; ++j)
    if (col_norm[j] > 0.0) phi_n.col(j) /= col_norm[j];
  const Eigen::VectorXd t_n = t / t_scale;

  const double mean_t = t_n.mean();
  double var_t = (t_n.array() - mean_t).square().mean();
  if (var_t < 1e-12) var_t = t_n.squaredNorm() / static_cast<double>(m);
  double beta = 100.0 / var_t;
  Eigen::VectorXd alpha = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(active.size()));

  for (int it = 0; it < hyper.max_iters; ++it) {
    const Eigen::MatrixXd phi_a = select_columns(phi_n, active);
    const PosteriorDiag post = posterior_diag(phi_a, t_n, alpha, beta);
    out.objective_trace.push_back(-0.5 * (post.log_det_c + post.quad) + hyperprior_terms(alpha, beta, hyper));

    const Eigen::VectorXd alpha_new = alpha_update(post.mu, post.sigma_diag, hyper);
    const double beta_new = beta_update(t_n, phi_a, post.mu, post.sigma_diag, alpha, beta, hyper, &out.warnings);
    if (!alpha_new.allFinite() || !std::isfinite(beta_new) || !post.mu.allFinite()) {
      fail(ErrorKind::Numerical, "sbl_solve diverged at iteration " + std::to_string(it) +
                                     " (objective trace length " + std::to_string(out.objective_trace.size()) + ")");
    }

    const double change = std::max(((alpha_new - alpha).array().abs() / alpha.array()).maxCoeff(),
                                   std::abs(beta_new - beta) / beta);

    alpha = alpha_new;
    beta = beta_new;
    out.iterations = it + 1;

    const auto keep = prune(alpha, hyper.prune, &out.warnings);
    if (keep.size() != active.size()) {
      std::vector<std::size_t> next;
      next.reserve(keep.size());
      for (std::size_t k : keep) next.push_back(active[k]);
      active = std::move(next);
      alpha = select(alpha, keep);
    }
    if (change < hyper.convergence_tol) {
      out.converged = true;
      break;
    }
  }

  const Eigen::MatrixXd phi_a = select_columns(phi_n, active);
  const PosteriorDiag final_diag = posterior_diag(phi_a, t_n, alpha, beta);
  out.objective_trace.push_back(-0.5 * (final_diag.log_det_c + final_diag.quad) + hyperprior_terms(alpha, beta, hyper));
  GaussianPosterior post;
  if (phi_a.cols() > phi_a.rows()) {
    // Woodbury: Sigma = Gamma - Gamma Phi^T C^-1 Phi Gamma.
    const Eigen::VectorXd gamma = alpha.cwiseInverse();
    const Eigen::MatrixXd a = gamma.asDiagonal() * phi_a.transpose();
    Eigen::MatrixXd c = phi_a * a;
    c.diagonal().array() += 1.0 / beta;
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    const Eigen::MatrixXd w = llt.matrixL().solve(a.transpose());
    post.sigma = -(w.transpose() * w);
    post.sigma.diagonal() += gamma;
    post.mu = final_diag.mu;
  } else {
    post = posterior_update(phi_a, t_n, alpha, beta);
  }

  // Back to caller units: w = t_scale * D^-1 w_n.
  for (std::size_t k = 0; k < active.size(); ++k) {
    const auto j = static_cast<Eigen::Index>(active[k]);
    const auto kk = static_cast<Eigen::Index>(k);
    const double s = t_scale / col_norm[j];
    out.mu[j] = s * post.mu[kk];
    out.alpha[j] = alpha[kk] / (s * s);
    for (std::size_t l = 0; l < active.size(); ++l) {
      const auto jl = static_cast<Eigen::Index>(active[l]);
      out.sigma(j, jl) = s * (t_scale / col_norm[jl]) * post.sigma(kk, static_cast<Eigen::Index>(l));
    }
  }
  out.beta = beta / (t_scale * t_scale);
  out.active_set = active;
  return out;
}

double gaussian_entropy(const Eigen::MatrixXd& sigma) {
  require(sigma.rows() == sigma.cols() && sigma.rows() > 0, "gaussian_entropy: square matrix required");
  const double n = static_cast<double>(sigma.rows());
  return 0.5 * n * (std::log(2.0 * std::numbers::pi) + 1.0) + 0.5 * log_det_spd(sigma, "covariance");
}

}  // namespace spectramap
