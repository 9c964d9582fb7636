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

// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance [--report FILE] [--only N[,N...]] [--seeds S] [--strict]
//
// Exit status is 0 once every selected criterion has been evaluated, whatever
// the verdicts; --strict also fails on any FAIL line.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "clustering.hpp"
#include "dictionary.hpp"
#include "evaluation.hpp"
#include "instances.hpp"
#include "oracles.hpp"
#include "pipeline.hpp"
#include "sampling.hpp"
#include "sbl.hpp"

using namespace spectramap;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(rows, cols);
  for (auto& v : a.reshaped()) v = nd(rng);
  return a;
}

Eigen::VectorXd uniform(Eigen::Index n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ud(lo, hi);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = ud(rng);
  return v;
}

double rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  const double scale = std::max(want.cwiseAbs().maxCoeff(), 1e-300);
  return (got - want).cwiseAbs().maxCoeff() / scale;
}

// ---- 1 ---------------------------------------------------------------------
Verdict posterior_oracle() {
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    std::mt19937_64 rng(100 + s);
    const Eigen::Index n = 5 + s % 21;
    const Eigen::Index m = 3 + s % 13;
    const Eigen::MatrixXd phi = gaussian(m, n, rng);
    const Eigen::VectorXd t = gaussian(m, 1, rng);
    const Eigen::VectorXd alpha = uniform(n, 0.1, 10.0, rng);
    const double beta = uniform(1, 0.5, 50.0, rng)[0];
    const auto post = posterior_update(phi, t, alpha, beta);
    const auto ref = oracle::joint_conditioning(phi, t, alpha, beta);
    worst = std::max({worst, rel_err(post.mu, ref.mean), rel_err(post.sigma, ref.cov)});
  }
  return {worst <= 1e-8, fmt("max relative error %.3g (tol 1e-8)", worst)};
}

// ---- 2 ---------------------------------------------------------------------
Verdict em_ascent() {
  double worst_drop = 0.0;
  std::size_t steps = 0;
  SblHyperparams h;
  h.prune = PruneMode::fixed(0.0);
  for (int s = 0; s < 50; ++s) {
    std::mt19937_64 rng(200 + s);
    const Eigen::Index m = 15 + s % 10;
    const Eigen::Index n = 30 + 2 * (s % 15);
    const Eigen::MatrixXd phi = gaussian(m, n, rng);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < 3; ++k) w[static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n))] = 1.0 + k;
    const Eigen::VectorXd t = phi * w + 0.05 * gaussian(m, 1, rng);
    const auto post = sbl_solve(phi, t, h);
    for (std::size_t i = 1; i < post.objective_trace.size(); ++i) {
      worst_drop = std::max(worst_drop, post.objective_trace[i - 1] - post.objective_trace[i]);
      ++steps;
    }
  }
  return {worst_drop <= 1e-9, fmt("largest decrease %.3g over %zu EM steps (slack 1e-9)", worst_drop, steps)};
}

// ---- 3 ---------------------------------------------------------------------
Verdict stationarity() {
  double worst = 0.0;
  SblHyperparams h;
  for (int s = 0; s < 50; ++s) {
    std::mt19937_64 rng(300 + s);
    const Eigen::Index m = 6 + s % 10;
    const Eigen::Index n = 8 + s % 17;
    const Eigen::MatrixXd phi = gaussian(m, n, rng);
    const Eigen::VectorXd t = gaussian(m, 1, rng);
    const Eigen::VectorXd alpha = uniform(n, 0.2, 5.0, rng);
    const double beta = uniform(1, 0.5, 20.0, rng)[0];
    const auto post = posterior_update(phi, t, alpha, beta);
    const Eigen::VectorXd sd = post.sigma.diagonal();

    const Eigen::VectorXd a_new = alpha_update(post.mu, sd, h);
    for (Eigen::Index i = 0; i < n; ++i) {
      auto f = [&](double x) {
        Eigen::VectorXd v = a_new;
        v[i] = x;
        return alpha_surrogate(v, post.mu, sd, h);
      };
      worst = std::max(worst, std::abs(oracle::central_difference(f, a_new[i], 1e-5 * a_new[i])));
    }
    const double resid = expected_residual(t, phi, post);
    const double b_new = beta_update(t, phi, post.mu, sd, alpha, beta, h);
    auto g = [&](double x) { return beta_surrogate(x, resid, static_cast<std::size_t>(m), h); };
    worst = std::max(worst, std::abs(oracle::central_difference(g, b_new, 1e-5 * b_new)));
  }
  return {worst <= 1e-6, fmt("max |dL/dtheta| at the updates %.3g (tol 1e-6)", worst)};
}

// ---- 4 ---------------------------------------------------------------------
Verdict determinants() {
  double worst = 0.0;
  int first_pick_ok = 0;
  for (int s = 0; s < 100; ++s) {
    std::mt19937_64 rng(400 + s);
    const Eigen::Index n = 2 + s % 11;
    const Eigen::MatrixXd d = gaussian(n, n, rng);
    const double ridge = gram_ridge(d);
    const auto plan = greedy_mmi_plan(d, static_cast<std::size_t>(n));

    auto logdet = [&](const std::vector<std::size_t>& rows) {
      if (rows.empty()) return 0.0;
      SamplingPlan p{SamplingMethod::Random, 0, static_cast<std::size_t>(n), rows, {}};
      const Eigen::MatrixXd phi = sensing_matrix(d, p);
      Eigen::MatrixXd g = phi * phi.transpose();
      g.diagonal().array() += ridge;
      return oracle::log_abs_det(g);
    };
    auto close = [&](double got, double want) {
      worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
    };

    std::vector<std::size_t> prefix;
    double previous = 0.0;
    for (std::size_t t = 0; t < plan.size(); ++t) {
      // Best increment over every remaining row, by brute force.
      double best_gain = -std::numeric_limits<double>::infinity();
      std::size_t best_row = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        if (std::find(prefix.begin(), prefix.end(), jj) != prefix.end()) continue;
        auto with = prefix;
        with.push_back(jj);
        const double gain = logdet(with) - previous;
        if (gain > best_gain) {
          best_gain = gain;
          best_row = jj;
        }
      }
      if (t == 0 && plan.indices[0] == best_row) ++first_pick_ok;
      prefix.push_back(plan.indices[t]);
      const double chain = logdet(prefix);
      close(plan.log_det_trace[t], chain);
      close(plan.log_det_trace[t] - (t ? plan.log_det_trace[t - 1] : 0.0), best_gain);
      previous = chain;
    }
    if (n <= 8) {
      SamplingPlan p{SamplingMethod::Random, 0, static_cast<std::size_t>(n), plan.indices, {}};
      const Eigen::MatrixXd phi = sensing_matrix(d, p);
      Eigen::MatrixXd g = phi * phi.transpose();
      g.diagonal().array() += ridge;
      close(plan.log_det_trace.back(), std::log(std::abs(oracle::cofactor_det(g))));
    }
  }
  const bool ok = worst <= 1e-9 && first_pick_ok == 100;
  return {ok, fmt("max log-domain relative error %.3g (tol 1e-9); first pick = best singleton on %d/100",
                  worst, first_pick_ok)};
}

// ---- 5 ---------------------------------------------------------------------
Verdict entropy() {
  double worst = 0.0;
  std::string parts;
  for (int n : {1, 2, 5}) {
    std::mt19937_64 rng(500 + n);
    const Eigen::MatrixXd a = gaussian(n, n, rng);
    const Eigen::MatrixXd sigma = a * a.transpose() + Eigen::MatrixXd::Identity(n, n);
    const double exact = gaussian_entropy(sigma);
    const double mc = oracle::monte_carlo_entropy(sigma, 1000000, 5000 + static_cast<std::uint64_t>(n));
    const double rel = std::abs(exact - mc) / std::abs(exact);
    worst = std::max(worst, rel);
    parts += fmt(" N=%d %.4f/%.4f", n, exact, mc);
  }
  return {worst <= 5e-3, fmt("max relative gap %.3g (tol 5e-3);%s", worst, parts.c_str())};
}

// ---- 6 ---------------------------------------------------------------------
Verdict exact_recovery() {
  int ok = 0;
  double worst = -1e9;
  SblHyperparams h;
  h.prune = PruneMode::fixed(kFixedPruneThreshold);
  for (int s = 0; s < 100; ++s) {
    std::mt19937_64 rng(1000 + s);
    const Eigen::MatrixXd phi = gaussian(40, 200, rng);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(200);
    std::vector<int> idx(200);
    for (int i = 0; i < 200; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::uniform_real_distribution<double> ud(1.0, 2.0);
    for (int k = 0; k < 4; ++k) w[idx[static_cast<std::size_t>(k)]] = ud(rng);
    const auto post = sbl_solve(phi, phi * w, h);
    const double mse = mse_db(post.mu, w);
    const auto cands = sparsify(post.mu.cwiseMax(0.0), -30.0);
    bool support = cands.size() == 4;
    for (const auto& c : cands) support = support && w[static_cast<Eigen::Index>(c.index)] > 0.0;
    if (mse <= -60.0 && support) ++ok;
    worst = std::max(worst, mse);
  }
  return {ok >= 95, fmt("%d/100 trials with MSE <= -60 dB and exact support (need 95); worst MSE %.1f dB", ok, worst)};
}

// ---- 7 ---------------------------------------------------------------------
Verdict friis() {
  ScenarioConfig cfg;
  cfg.grid = {5, 5, 5};
  RtParams rt;
  rt.ground_reflection = false;
  const auto dict = build_dictionary(cfg, rt, {});
  const auto centers = cube_centers(cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = 0; j < centers.size(); ++j) {
      const double d = euclidean_distance(centers[i], centers[j]);
      const double want = friis_gain(cfg, d, rt.reference_distance);
      const double got = dict.gains(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      worst = std::max(worst, std::abs(got - want) / want);
    }
  return {worst <= 1e-3, fmt("max relative deviation %.3g over %zu pairs (tol 1e-3)", worst, centers.size() * centers.size())};
}

// ---- 8 ---------------------------------------------------------------------
Verdict clustering() {
  int matched = 0;
  const auto insts = instances::well_separated();
  for (const auto& inst : insts) {
    std::vector<Eigen::Vector3d> pts;
    for (const auto& c : inst.candidates) pts.push_back(cube_center(inst.cfg, c.index));
    if (oracle::canonical(mmd_cluster(inst.cfg, inst.candidates, 0.5)) ==
        oracle::canonical(oracle::best_partition(pts)))
      ++matched;
  }

  ScenarioConfig line;
  line.roi_extent = {8, 4, 4};
  line.grid = {2, 1, 1};
  ClusterReport report;
  refine_clusters(line, {{0, 3.0}, {1, 1.0}}, {{0, 1}}, &report);
  // weights {3, 1} at x = {2, 6}: centroid 3.0, power (9 + 1) / 4
  double err = std::max(std::abs(report.centers[0].x() - 3.0), std::abs(report.powers[0] - 2.5));
  ScenarioConfig cfg;
  refine_clusters(cfg, {{321, 0.8}}, {{0}}, &report);
  err = std::max({err, (report.centers[0] - cube_center(cfg, 321)).norm(), std::abs(report.powers[0] - 0.8)});
  refine_clusters(cfg, {{0, 1.0}, {1, 1.0}, {10, 1.0}, {11, 1.0}}, {{0, 1, 2, 3}}, &report);
  err = std::max({err, (report.centers[0] - Vec3(10, 10, 2.5)).norm(), std::abs(report.powers[0] - 1.0)});

  const bool ok = matched == static_cast<int>(insts.size()) && err <= 1e-12;
  return {ok, fmt("%d/%zu instances match the exhaustive optimum; refinement error %.3g (tol 1e-12)", matched,
                  insts.size(), err)};
}

// ---- 9 and 10 ----------------------------------------------------------------
struct Stat {
  double mean = 0.0, sd = 0.0;
  std::size_t n = 0;
};

Stat stat_of(const std::vector<double>& v) {
  Stat s;
  s.n = v.size();
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(s.n);
  for (double x : v) s.sd += (x - s.mean) * (x - s.mean);
  s.sd = s.n > 1 ? std::sqrt(s.sd / static_cast<double>(s.n - 1)) : 0.0;
  return s;
}

double pooled_se(const Stat& a, const Stat& b) {
  return std::sqrt(a.sd * a.sd / static_cast<double>(a.n) + b.sd * b.sd / static_cast<double>(b.n));
}

std::vector<std::uint64_t> seed_list(int count) {
  std::vector<std::uint64_t> s;
  for (int i = 1; i <= count; ++i) s.push_back(static_cast<std::uint64_t>(i));
  return s;
}

Verdict directional(int seeds, std::string& table) {
  ExperimentSpec spec = default_experiment();
  spec.rates = {0.03, 0.05, 0.1, 0.2};
  spec.sparsities = {4};
  spec.seeds = seed_list(seeds);
  spec.record_runtime = false;
  const auto records = run_experiment(spec);

  std::map<std::string, std::map<double, std::vector<double>>> rmse;
  std::size_t errors = 0;
  for (const auto& r : records) {
    if (!r.error.empty()) {
      ++errors;
      continue;
    }
    rmse[r.algorithm][r.rate].push_back(r.rmse);
  }

  bool ok = errors == 0;
  std::vector<std::string> violations;
  for (const auto& [algo, by_rate] : rmse) {
    table += fmt("    %-13s", algo.c_str());
    const Stat* prev = nullptr;
    Stat prev_store;
    double prev_rate = 0.0;
    for (const auto& [rate, vals] : by_rate) {
      const Stat s = stat_of(vals);
      table += fmt("  r=%.2f %6.2f+-%.2f", rate, s.mean, s.sd / std::sqrt(static_cast<double>(s.n)));
      if (prev && s.mean > prev->mean + pooled_se(*prev, s)) {
        ok = false;
        violations.push_back(fmt("%s %.2f->%.2f rises %.2f dB > SE %.2f", algo.c_str(), prev_rate, rate,
                                 s.mean - prev->mean, pooled_se(*prev, s)));
      }
      prev_store = s;
      prev = &prev_store;
      prev_rate = rate;
    }
    table += "\n";
  }
  const Stat cm = stat_of(rmse["MMI-CMSBL"][0.1]);
  const Stat rs = stat_of(rmse["Random-SBL"][0.1]);
  const bool ordered = cm.mean <= rs.mean;
  ok = ok && ordered;
  std::string detail = fmt("r=0.1 RMSE MMI-CMSBL %.2f dB vs Random-SBL %.2f dB (%s); monotone in r: %s", cm.mean,
                           rs.mean, ordered ? "ok" : "violated", violations.empty() ? "all algorithms" : "violated");
  for (const auto& v : violations) detail += "; " + v;
  if (errors) detail += fmt("; %zu failed cells", errors);
  detail += fmt("; %d seeds", seeds);
  return {ok, detail};
}

Verdict sparsity_trend(int seeds, std::string& table) {
  ExperimentSpec spec = default_experiment();
  spec.rates = {0.1};
  spec.sparsities = {4, 8, 12, 16};
  spec.algorithms = {"MMI-CMSBL"};
  spec.seeds = seed_list(seeds);
  spec.record_runtime = false;
  const auto records = run_experiment(spec);
  std::map<int, std::vector<double>> mse;
  std::size_t errors = 0;
  for (const auto& r : records) {
    if (r.error.empty()) mse[r.sparsity].push_back(r.mse_db);
    else ++errors;
  }
  bool ok = errors == 0;
  std::vector<std::string> violations;
  table += "    MMI-CMSBL    ";
  Stat prev;
  int prev_k = 0;
  for (const auto& [k, vals] : mse) {
    const Stat s = stat_of(vals);
    table += fmt("  K=%-2d %7.2f+-%.2f", k, s.mean, s.sd / std::sqrt(static_cast<double>(s.n)));
    if (prev_k && s.mean < prev.mean - pooled_se(prev, s)) {
      ok = false;
      violations.push_back(fmt("K %d->%d falls %.2f dB > SE %.2f", prev_k, k, prev.mean - s.mean, pooled_se(prev, s)));
    }
    prev = s;
    prev_k = k;
  }
  table += "\n";
  std::string detail = fmt("MSE non-decreasing in K at r=0.1: %s", violations.empty() ? "yes" : "no");
  for (const auto& v : violations) detail += "; " + v;
  if (errors) detail += fmt("; %zu failed cells", errors);
  detail += fmt("; %d seeds", seeds);
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::string report_path;
  std::set<int> only;
  int seeds = 20;
  bool strict = false;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--report" && i + 1 < argc) {
      report_path = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) only.insert(std::stoi(tok));
    } else if (a == "--seeds" && i + 1 < argc) {
      seeds = std::stoi(argv[++i]);
    } else if (a == "--strict") {
      strict = true;
    } else {
      std::fprintf(stderr, "usage: acceptance [--report FILE] [--only N[,N...]] [--seeds S] [--strict]\n");
      return 2;
    }
  }

  std::string table9, table10;
  const std::vector<std::tuple<int, const char*, double, std::function<Verdict()>>> criteria{
      {1, "posterior oracle", 5.0, posterior_oracle},
      {2, "EM ascent", 30.0, em_ascent},
      {3, "update stationarity", 0.0, stationarity},
      {4, "determinant identities", 0.0, determinants},
      {5, "entropy lemma", 0.0, entropy},
      {6, "exact recovery", 60.0, exact_recovery},
      {7, "Friis reduction", 0.0, friis},
      {8, "clustering oracle", 0.0, clustering},
      {9, "directional RMSE vs rate", 600.0, [&] { return directional(seeds, table9); }},
      {10, "sparsity trend", 0.0, [&] { return sparsity_trend(seeds, table10); }},
  };

  std::ostringstream report;
  int failed = 0;
  for (const auto& [id, name, limit, run] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit > 0.0 && secs >= limit) {
      v.pass = false;
      v.detail += fmt("; runtime over the %.0f s limit", limit);
    }
    const std::string line = fmt("criterion %2d %s  %-24s ", id, v.pass ? "PASS" : "FAIL", name) + v.detail +
                             fmt(" [%.2f s%s]", secs, limit > 0.0 ? fmt(", limit %.0f s", limit).c_str() : "");
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    report << line << "\n";
    if (id == 9 && !table9.empty()) report << "  mean RMSE (dB) +- standard error at K=4:\n" << table9;
    if (id == 10 && !table10.empty()) report << "  mean MSE (dB) +- standard error at r=0.1:\n" << table10;
    failed += !v.pass;
  }
  if (!table9.empty()) std::printf("  mean RMSE (dB) +- standard error at K=4:\n%s", table9.c_str());
  if (!table10.empty()) std::printf("  mean MSE (dB) +- standard error at r=0.1:\n%s", table10.c_str());
  std::printf("%d criterion(s) failed\n", failed);

  if (!report_path.empty()) {
    std::ofstream out(report_path);
    out << report.str() << failed << " criterion(s) failed\n";
  }
  return strict && failed ? 1 : 0;
}
