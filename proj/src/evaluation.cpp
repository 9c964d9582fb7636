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

#include "evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <tuple>

#include "error.hpp"
#include "parallel.hpp"
#include "pipeline.hpp"
#include "sampling.hpp"

namespace spectramap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

std::size_t sample_count(double rate, std::size_t n) {
  const auto m = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
  return std::clamp<std::size_t>(m, 1, n);
}

struct Truth {
  std::vector<Transmitter> transmitters;
  Eigen::VectorXd omega;
  Eigen::VectorXd x;
};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

double mse_db(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth, bool squared) {
  require(estimate.size() == truth.size(), "mse_db: length mismatch");
  const double ref = truth.norm();
  if (!(ref > 0.0)) fail(ErrorKind::Domain, "mse_db: true vector is zero");
  double ratio = (estimate - truth).norm() / ref;
  if (squared) ratio *= ratio;
  if (ratio <= 0.0) return kMseFloorDb;
  return std::max(10.0 * std::log10(ratio), kMseFloorDb);
}

double watts_to_dbm(double watts) {
  if (!(watts > 0.0)) return kDbmFloor;
  return std::max(10.0 * std::log10(watts / 1e-3), kDbmFloor);
}

double rmse_dbm(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth) {
  require(estimate.size() == truth.size() && truth.size() > 0, "rmse: length mismatch");
  if (!estimate.allFinite() || !truth.allFinite()) fail(ErrorKind::Numerical, "rmse: non-finite input");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    const double diff = watts_to_dbm(estimate[i]) - watts_to_dbm(truth[i]);
    sum += diff * diff;
  }
  return std::sqrt(sum / static_cast<double>(truth.size()));
}

double rmse_linear(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth) {
  require(estimate.size() == truth.size() && truth.size() > 0, "rmse: length mismatch");
  return std::sqrt((estimate - truth).squaredNorm() / static_cast<double>(truth.size()));
}

double support_distortion(const ScenarioConfig& cfg, const Eigen::VectorXd& omega_est,
                          const Eigen::VectorXd& omega_true) {
  std::vector<Vec3> est, truth;
  for (Eigen::Index i = 0; i < omega_est.size(); ++i)
    if (omega_est[i] > 0.0) est.push_back(cube_center(cfg, static_cast<std::size_t>(i)));
  for (Eigen::Index i = 0; i < omega_true.size(); ++i)
    if (omega_true[i] > 0.0) truth.push_back(cube_center(cfg, static_cast<std::size_t>(i)));
  if (est.empty() || truth.empty()) return cfg.roi_extent.norm();

  auto directed = [](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, (p - q).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(est, truth), directed(truth, est));
}

std::size_t sample_complexity_bound(std::size_t n, std::size_t k) {
  require(k >= 1 && k < n, "sample_complexity_bound: need 1 <= K < N");
  const double bound = 2.0 * static_cast<double>(k) * std::log(static_cast<double>(n) / static_cast<double>(k));
  return static_cast<std::size_t>(std::floor(bound)) + 1;
}

void validate(const ExperimentSpec& spec) {
  validate(spec.scenario);
  validate(spec.rt);
  require(!spec.rates.empty(), "experiment: no sampling rates");
  for (double r : spec.rates) require(r > 0.0 && r <= 1.0, "experiment: rates must be in (0, 1]");
  require(!spec.sparsities.empty(), "experiment: no sparsity levels");
  for (int k : spec.sparsities) require(k >= 1, "experiment: K must be >= 1");
  require(!spec.seeds.empty(), "experiment: no seeds");
  require(!spec.algorithms.empty(), "experiment: no algorithms");
  for (const auto& a : spec.algorithms) algorithm_from_name(a);
  require(spec.power_watts > 0.0, "experiment: power must be > 0");
}

ExperimentSpec default_experiment() {
  ExperimentSpec spec;
  spec.scenario = box_scenario();
  spec.rates = {0.03, 0.05, 0.1, 0.2};
  spec.sparsities = {4, 8, 12, 16};
  spec.algorithms = known_algorithms();
  spec.seeds = {1, 2, 3, 4, 5};
  return spec;
}

std::vector<MetricRecord> run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  ScenarioConfig cfg = spec.scenario;
  cfg.transmitters.clear();
  const std::size_t n = cfg.cube_count();

  std::vector<AlgorithmSpec> algos;
  for (const auto& name : spec.algorithms) algos.push_back(algorithm_from_name(name));
  const bool need_rt = std::any_of(algos.begin(), algos.end(), [](const auto& a) { return a.rt_dictionary; });
  const bool need_fs = std::any_of(algos.begin(), algos.end(), [](const auto& a) { return !a.rt_dictionary; });

  GainDictionary rt_dict, fs_dict;
  if (need_rt) rt_dict = build_dictionary(cfg, spec.rt, spec.rt_dictionary, spec.jobs);
  if (need_fs) {
    DictionaryMode fs;
    fs.kind = DictionaryKind::FreeSpace;
    fs_dict = build_dictionary(cfg, spec.rt, fs, spec.jobs);
  }
  auto dictionary_for = [&](const AlgorithmSpec& a) -> const Eigen::MatrixXd& {
    return a.rt_dictionary ? rt_dict.gains : fs_dict.gains;
  };

  // MMI plans depend only on the dictionary and M.
  std::map<std::pair<bool, std::size_t>, SamplingPlan> mmi_plans;
  for (const auto& a : algos) {
    if (a.sampler != SamplingMethod::Mmi) continue;
    for (double r : spec.rates) {
      const auto key = std::make_pair(a.rt_dictionary, sample_count(r, n));
      if (!mmi_plans.contains(key)) mmi_plans.emplace(key, greedy_mmi_plan(dictionary_for(a), key.second));
    }
  }

  // Ground truth per (K, seed), shared by every algorithm and rate.
  std::map<std::pair<int, std::uint64_t>, Truth> truths;
  for (int k : spec.sparsities) {
    for (std::uint64_t seed : spec.seeds) {
      std::mt19937_64 rng(mix(seed, static_cast<std::uint64_t>(k)));
      ScenarioConfig scene = cfg;
      scene.transmitters = spec.grid_transmitters ? random_grid_transmitters(cfg, k, spec.power_watts, rng)
                                                  : random_transmitters(cfg, k, spec.power_watts, rng);
      Truth truth;
      truth.transmitters = scene.transmitters;
      truth.omega = sparse_truth(scene);
      truth.x = ground_truth_map(scene, spec.rt, spec.free_space_truth);
      truths.emplace(std::make_pair(k, seed), std::move(truth));
    }
  }

  struct Cell {
    std::size_t algo;
    std::size_t rate;
    int k;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t a = 0; a < algos.size(); ++a)
    for (std::size_t r = 0; r < spec.rates.size(); ++r)
      for (int k : spec.sparsities)
        for (std::uint64_t seed : spec.seeds) cells.push_back({a, r, k, seed});

  std::vector<MetricRecord> records(cells.size());
  parallel_for(cells.size(), spec.jobs, [&](std::size_t c) {
    const Cell& cell = cells[c];
    const AlgorithmSpec& algo = algos[cell.algo];
    const double rate = spec.rates[cell.rate];
    const std::size_t m = sample_count(rate, n);
    MetricRecord& rec = records[c];
    rec.algorithm = algo.name;
    rec.rate = rate;
    rec.sparsity = cell.k;
    rec.seed = cell.seed;
    rec.samples = m;
    try {
      const Truth& truth = truths.at({cell.k, cell.seed});
      const SamplingPlan plan = algo.sampler == SamplingMethod::Mmi
                                    ? mmi_plans.at({algo.rt_dictionary, m})
                                    : random_plan(n, m, mix(cell.seed, 0x5a3c + cell.rate));
      const MeasurementVector meas =
          measure(truth.x, plan, cfg.noise_variance,
                  mix(mix(cell.seed, static_cast<std::uint64_t>(cell.k)), cell.rate * 2 + (algo.sampler == SamplingMethod::Mmi)));
      const auto start = std::chrono::steady_clock::now();
      const RecoveredMap result = recover(cfg, dictionary_for(algo), plan, meas, algo.recovery, algo.name);
      const auto stop = std::chrono::steady_clock::now();
      rec.mse_db = mse_db(result.omega_star, truth.omega, spec.squared_mse);
      rec.rmse = rmse_dbm(result.x_hat, truth.x);
      rec.rmse_linear = rmse_linear(result.x_hat, truth.x);
      rec.support_distortion = support_distortion(cfg, result.omega_star, truth.omega);
      rec.runtime_seconds = spec.record_runtime ? std::chrono::duration<double>(stop - start).count() : 0.0;
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });

  std::sort(records.begin(), records.end(), [](const MetricRecord& a, const MetricRecord& b) {
    return std::tie(a.algorithm, a.rate, a.sparsity, a.seed) < std::tie(b.algorithm, b.rate, b.sparsity, b.seed);
  });
  return records;
}

std::vector<SummaryRow> summarize(const std::vector<MetricRecord>& records) {
  std::map<std::tuple<std::string, double, int>, std::vector<const MetricRecord*>> groups;
  for (const auto& r : records)
    if (r.error.empty()) groups[{r.algorithm, r.rate, r.sparsity}].push_back(&r);

  std::vector<SummaryRow> out;
  for (const auto& [key, rows] : groups) {
    std::vector<double> mse, rmse, dist, runtime;
    for (const auto* r : rows) {
      mse.push_back(r->mse_db);
      rmse.push_back(r->rmse);
      dist.push_back(r->support_distortion);
      runtime.push_back(r->runtime_seconds);
    }
    SummaryRow s;
    s.algorithm = std::get<0>(key);
    s.rate = std::get<1>(key);
    s.sparsity = std::get<2>(key);
    s.count = rows.size();
    s.mse_db_mean = mean_of(mse);
    s.mse_db_std = std_of(mse);
    s.rmse_mean = mean_of(rmse);
    s.rmse_std = std_of(rmse);
    s.distortion_mean = mean_of(dist);
    s.distortion_std = std_of(dist);
    s.runtime_mean = mean_of(runtime);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace spectramap
