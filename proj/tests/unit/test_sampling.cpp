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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <Eigen/LU>

#include "doctest.h"
#include "error.hpp"
#include "oracles.hpp"
#include "sampling.hpp"

using namespace spectramap;
using doctest::Approx;

namespace {

SamplingPlan plan_of(std::size_t n, std::vector<std::size_t> idx) {
  return {SamplingMethod::Random, 0, n, std::move(idx), {}};
}

}  // namespace

TEST_CASE("random plan") {
  auto full = random_plan(50, 50, 3);
  std::set<std::size_t> all(full.indices.begin(), full.indices.end());
  CHECK(all.size() == 50);
  CHECK(*all.rbegin() == 49);

  CHECK(random_plan(1000, 100, 7).indices == random_plan(1000, 100, 7).indices);
  CHECK(random_plan(1000, 100, 7).indices != random_plan(1000, 100, 8).indices);
  CHECK_THROWS_AS(random_plan(10, 0, 1), Error);
  CHECK_THROWS_AS(random_plan(10, 11, 1), Error);
}

TEST_CASE("random plan inclusion frequency is uniform") {
  const std::size_t n = 1000, m = 100, trials = 10000;
  std::vector<int> hits(n, 0);
  for (std::size_t s = 0; s < trials; ++s)
    for (auto i : random_plan(n, m, s).indices) ++hits[i];
  const double p = static_cast<double>(m) / n;
  const double mean = p * trials;
  const double sigma = std::sqrt(trials * p * (1 - p));
  int outside = 0;
  for (int h : hits) outside += std::abs(h - mean) > 3 * sigma;
  // 0.27% expected outside 3 sigma.
  CHECK(outside <= 10);
}

TEST_CASE("sensing matrix selects dictionary rows") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Random(6, 6);
  auto plan = plan_of(6, {4, 1});
  auto phi = sensing_matrix(d, plan);
  CHECK(phi.rows() == 2);
  CHECK(phi.row(0) == d.row(4));
  CHECK(phi.row(1) == d.row(1));
}

TEST_CASE("mmi objective") {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(6, 6);
  CHECK(std::abs(mmi_objective(eye, plan_of(6, {0, 2, 5}))) < 1e-9);

  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd d(6, 6);
  for (auto& v : d.reshaped()) v = nd(rng);
  auto plan = plan_of(6, {1, 3, 4});
  Eigen::MatrixXd phi = sensing_matrix(d, plan);
  Eigen::MatrixXd g = phi * phi.transpose();
  g.diagonal().array() += gram_ridge(phi);
  CHECK(mmi_objective(d, plan) == Approx(std::log(oracle::cofactor_det(g))).epsilon(1e-10));

  Eigen::MatrixXd dup = d;
  dup.row(2) = dup.row(1);
  CHECK(mmi_objective(dup, plan_of(6, {1, 2})) < mmi_objective(d, plan_of(6, {1, 2})) - 10.0);
}

TEST_CASE("greedy mmi on small matrices") {
  Eigen::MatrixXd diag = Eigen::Vector3d(3, 1, 2).asDiagonal();
  auto plan = greedy_mmi_plan(diag, 2);
  CHECK(plan.indices == std::vector<std::size_t>{0, 2});
  CHECK(plan.method == SamplingMethod::Mmi);

  Eigen::MatrixXd twins(3, 3);
  twins << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  auto p2 = greedy_mmi_plan(twins, 2);
  CHECK_FALSE((std::count(p2.indices.begin(), p2.indices.end(), 0) && std::count(p2.indices.begin(), p2.indices.end(), 1)));
}

TEST_CASE("greedy log-det trace matches the direct chain") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 4 + rep % 9;
    Eigen::MatrixXd d(n, n);
    for (auto& v : d.reshaped()) v = nd(rng);
    auto plan = greedy_mmi_plan(d, static_cast<std::size_t>(n));
    for (std::size_t t = 0; t < plan.size(); ++t) {
      auto prefix = plan_of(static_cast<std::size_t>(n), {plan.indices.begin(), plan.indices.begin() + t + 1});
      Eigen::MatrixXd phi = sensing_matrix(d, prefix);
      Eigen::MatrixXd g = phi * phi.transpose();
      g.diagonal().array() += gram_ridge(d);
      const double direct = std::log(g.determinant());
      CHECK(plan.log_det_trace[t] == Approx(direct).epsilon(1e-8));
    }
  }
}

TEST_CASE("measurement") {
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(20, 1.0, 20.0);
  auto plan = plan_of(20, {3, 9, 0});
  auto m = measure(x, plan, 0.0, 1);
  CHECK(m.values == Eigen::Vector3d(4, 10, 1));

  auto all = random_plan(20, 20, 4);
  auto full = measure(x, all, 0.0, 1);
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(full.values[static_cast<Eigen::Index>(i)] == x[static_cast<Eigen::Index>(all.indices[i])]);

  const double var = 0.25;
  auto one = plan_of(20, {5});
  double sum = 0.0, sq = 0.0;
  const int draws = 100000;
  for (int s = 0; s < draws; ++s) {
    const double e = measure(x, one, var, static_cast<std::uint64_t>(s)).values[0] - x[5];
    sum += e;
    sq += e * e;
  }
  const double mean = sum / draws;
  CHECK(sq / draws - mean * mean == Approx(var).epsilon(0.02));
  CHECK(measure(x, plan, var, 42).values == measure(x, plan, var, 42).values);
}

TEST_CASE("mutual information") {
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 5);
  CHECK(mutual_information(zero, Eigen::VectorXd::Ones(5), 2.0) == Approx(0.0));
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(4, 4);
  CHECK(mutual_information(eye, Eigen::VectorXd::Ones(4), 1.0) == Approx(0.5 * 4 * std::log(2.0)));
}
