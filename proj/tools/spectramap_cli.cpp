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

// spectramap command-line front end. Units at every file interface:
// meters, watts, hertz; exported maps in dBm.

#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "spectramap/spectramap.h"

namespace {

const char* category(spm_status s) {
  switch (s) {
    case SPM_OK: return "ok";
    case SPM_ERR_SCHEMA: return "schema";
    case SPM_ERR_NUMERICAL: return "numerical";
    case SPM_ERR_IO: return "io";
    default: return "internal";
  }
}

struct Failure {
  spm_status status;
};

void check(spm_status s) {
  if (s != SPM_OK) throw Failure{s};
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using Scenario = Handle<spm_scenario, spm_scenario_free>;
using Dictionary = Handle<spm_dictionary, spm_dictionary_free>;
using Plan = Handle<spm_plan, spm_plan_free>;
using Measurements = Handle<spm_measurements, spm_measurements_free>;
using Result = Handle<spm_result, spm_result_free>;

struct DictArgs {
  std::string scenario, out, csv, mode = "full_rt", metric = "index";
  double fraction = 1.0, idw_exponent = 2.0;
  std::uint64_t seed = 0;
  int idw_neighbors = 0;
  unsigned jobs = 1;
};

struct PlanArgs {
  std::string dict, method = "mmi", out;
  std::optional<double> rate;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 0;
};

struct MeasureArgs {
  std::string scenario, plan, out;
  std::uint64_t seed = 0;
  bool free_space = false;
};

struct RecoverArgs {
  std::string scenario, dict, plan, measurements, out, algorithm = "MMI-CMSBL";
  std::uint64_t seed = 0;
  std::optional<std::string> solver, prune;
  std::optional<bool> clustering;
  std::optional<double> prune_threshold, delta_db, theta, tol;
  std::optional<int> max_iters;
};

struct EvalArgs {
  std::string spec, out;
  unsigned jobs = 1;
};

struct ExportArgs {
  std::string result, format = "long", out;
};

void run_validate(const std::string& path) {
  Scenario s;
  check(spm_scenario_load(path.c_str(), s.out()));
  std::size_t n = 0;
  check(spm_scenario_cube_count(s.get(), &n));
  std::printf("valid: %zu cubes\n", n);
}

void run_dict_build(const DictArgs& a) {
  Scenario s;
  check(spm_scenario_load(a.scenario.c_str(), s.out()));
  spm_dict_options opt;
  spm_dict_options_default(&opt);
  if (a.mode == "full_rt") opt.kind = SPM_DICT_FULL_RT;
  else if (a.mode == "sparse_rt_idw") opt.kind = SPM_DICT_SPARSE_RT_IDW;
  else opt.kind = SPM_DICT_FREE_SPACE;
  opt.fraction = a.fraction;
  opt.idw_exponent = a.idw_exponent;
  opt.seed = a.seed;
  opt.cube_distance = a.metric == "cube_distance" ? 1 : 0;
  opt.idw_neighbors = a.idw_neighbors;
  Dictionary d;
  check(spm_dictionary_build(s.get(), &opt, a.jobs, d.out()));
  check(spm_dictionary_save(d.get(), a.out.c_str()));
  if (!a.csv.empty()) check(spm_dictionary_export_csv(d.get(), a.csv.c_str()));
}

void run_plan(const PlanArgs& a) {
  Dictionary d;
  check(spm_dictionary_load(a.dict.c_str(), d.out()));
  std::size_t n = 0;
  check(spm_dictionary_size(d.get(), &n));
  std::size_t m = 0;
  if (a.samples) m = *a.samples;
  else check(spm_samples_for_rate(n, *a.rate, &m));
  Plan p;
  if (a.method == "mmi") check(spm_plan_mmi(d.get(), m, p.out()));
  else check(spm_plan_random(n, m, a.seed, p.out()));
  check(spm_plan_save(p.get(), a.out.c_str()));
  std::printf("plan: %zu of %zu cubes\n", m, n);
}

void run_measure(const MeasureArgs& a) {
  Scenario s;
  check(spm_scenario_load(a.scenario.c_str(), s.out()));
  Plan p;
  check(spm_plan_load(a.plan.c_str(), p.out()));
  Measurements m;
  check(spm_measure(s.get(), p.get(), a.seed, a.free_space ? 1 : 0, m.out()));
  check(spm_measurements_save(m.get(), p.get(), a.out.c_str()));
}

void run_recover(const RecoverArgs& a) {
  Scenario s;
  check(spm_scenario_load(a.scenario.c_str(), s.out()));
  Dictionary d;
  check(spm_dictionary_load(a.dict.c_str(), d.out()));
  Plan p;
  check(spm_plan_load(a.plan.c_str(), p.out()));
  Measurements m;
  if (!a.measurements.empty()) check(spm_measurements_load(a.measurements.c_str(), m.out()));
  else check(spm_measure(s.get(), p.get(), a.seed, 0, m.out()));

  spm_recovery_options opt;
  check(spm_recovery_options_for(a.algorithm.c_str(), &opt, nullptr, nullptr));
  if (a.solver) opt.solver = *a.solver == "swomp" ? SPM_SOLVER_SWOMP : SPM_SOLVER_SBL;
  if (a.clustering) opt.clustering = *a.clustering ? 1 : 0;
  if (a.prune) opt.adaptive_prune = *a.prune == "adaptive" ? 1 : 0;
  if (a.prune_threshold) opt.prune_threshold = *a.prune_threshold;
  if (a.delta_db) opt.delta_db = *a.delta_db;
  if (a.theta) opt.theta = *a.theta;
  if (a.tol) opt.convergence_tol = *a.tol;
  if (a.max_iters) opt.max_iters = *a.max_iters;

  Result r;
  check(spm_recover(s.get(), d.get(), p.get(), m.get(), &opt, a.algorithm.c_str(), r.out()));
  check(spm_result_save(r.get(), a.out.c_str()));
}

void run_evaluate(const EvalArgs& a) {
  std::size_t count = 0;
  check(spm_evaluate(a.spec.c_str(), a.out.c_str(), a.jobs, &count));
  std::printf("records: %zu\n", count);
}

void run_export(const ExportArgs& a) { check(spm_export_map(a.result.c_str(), a.format.c_str(), a.out.c_str())); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectramap: 3D spectrum map reconstruction from sparse samples.\n"
               "Units: meters, watts, hertz; exported maps in dBm.\n"
               "Exit codes: 0 ok, 2 schema/argument error, 3 numerical failure, 4 I/O failure, 5 internal error."};
  app.require_subcommand(1);
  app.set_version_flag("--version", spm_version());

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario file (JSON) against the schema");
  validate->add_option("scenario", validate_path, "Scenario file")->required();

  DictArgs dict;
  auto* dict_cmd = app.add_subcommand("dict-build", "Build the N x N linear channel-gain dictionary");
  dict_cmd->add_option("--scenario", dict.scenario, "Scenario file")->required();
  dict_cmd->add_option("--out", dict.out, "Binary dictionary output")->required();
  dict_cmd->add_option("--mode", dict.mode, "full_rt | sparse_rt_idw | free_space")
      ->check(CLI::IsMember({"full_rt", "sparse_rt_idw", "free_space"}));
  dict_cmd->add_option("--fraction", dict.fraction, "Ray-traced fraction rho (sparse_rt_idw)");
  dict_cmd->add_option("--idw-exponent", dict.idw_exponent, "IDW exponent p");
  dict_cmd->add_option("--idw-metric", dict.metric, "index | cube_distance")
      ->check(CLI::IsMember({"index", "cube_distance"}));
  dict_cmd->add_option("--idw-neighbors", dict.idw_neighbors, "Anchors per IDW window (0 = all)");
  dict_cmd->add_option("--seed", dict.seed, "Anchor selection seed");
  dict_cmd->add_option("--csv", dict.csv, "Also write i,j,gain_db CSV");
  dict_cmd->add_option("--jobs", dict.jobs, "Worker threads")->check(CLI::PositiveNumber);

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Choose sampling cubes");
  plan_cmd->add_option("--dict", plan.dict, "Dictionary file")->required();
  plan_cmd->add_option("--method", plan.method, "random | mmi")->check(CLI::IsMember({"random", "mmi"}));
  auto* rate_opt = plan_cmd->add_option("--rate", plan.rate, "Sampling rate r in (0, 1]");
  auto* m_opt = plan_cmd->add_option("-M,--samples", plan.samples, "Number of samples M");
  rate_opt->excludes(m_opt);
  plan_cmd->add_option("--seed", plan.seed, "Seed for random plans");
  plan_cmd->add_option("--out", plan.out, "Plan output (JSON)")->required();
  plan_cmd->callback([&] {
    if (!plan.rate && !plan.samples) throw CLI::ValidationError("plan", "one of --rate or -M is required");
  });

  MeasureArgs meas;
  auto* meas_cmd = app.add_subcommand("measure", "Sample the scenario's ground-truth map at the plan");
  meas_cmd->add_option("--scenario", meas.scenario, "Scenario file with transmitters")->required();
  meas_cmd->add_option("--plan", meas.plan, "Plan file")->required();
  meas_cmd->add_option("--seed", meas.seed, "Noise seed");
  meas_cmd->add_flag("--free-space", meas.free_space, "Use the free-space model for the ground truth");
  meas_cmd->add_option("--out", meas.out, "Measurements output (JSON)")->required();

  RecoverArgs rec;
  auto* rec_cmd = app.add_subcommand("recover", "Recover the sparse transmitter map and the full RSS map");
  rec_cmd->add_option("--scenario", rec.scenario, "Scenario file")->required();
  rec_cmd->add_option("--dict", rec.dict, "Dictionary file")->required();
  rec_cmd->add_option("--plan", rec.plan, "Plan file")->required();
  rec_cmd->add_option("--measurements", rec.measurements,
                      "Measurements file; without it the scenario's transmitters are sampled");
  rec_cmd->add_option("--seed", rec.seed, "Noise seed when sampling the scenario");
  rec_cmd->add_option("--algorithm", rec.algorithm,
                      "Random-SBL | Random-CSBL | Random-MSBL | MMI-SBL | MMI-CMSBL | Random-SWOMP");
  rec_cmd->add_option("--solver", rec.solver, "sbl | swomp")->check(CLI::IsMember({"sbl", "swomp"}));
  rec_cmd->add_option("--clustering", rec.clustering, "Sparsify and cluster (true | false)");
  rec_cmd->add_option("--prune", rec.prune, "adaptive | fixed")->check(CLI::IsMember({"adaptive", "fixed"}));
  rec_cmd->add_option("--prune-threshold", rec.prune_threshold, "Fixed prune threshold (normalized alpha^-1)");
  rec_cmd->add_option("--delta-db", rec.delta_db, "Sparsify threshold, negative dB");
  rec_cmd->add_option("--theta", rec.theta, "MMD seed-distance fraction");
  rec_cmd->add_option("--max-iters", rec.max_iters, "SBL iteration cap");
  rec_cmd->add_option("--tol", rec.tol, "SBL relative convergence tolerance");
  rec_cmd->add_option("--out", rec.out, "Result output (JSON)")->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Run a seeded multi-algorithm sweep");
  eval_cmd->add_option("--spec", eval.spec, "Experiment file (JSON)")->required();
  eval_cmd->add_option("--out", eval.out, "Output directory")->required();
  eval_cmd->add_option("--jobs", eval.jobs, "Worker threads")->check(CLI::PositiveNumber);

  ExportArgs exp;
  auto* exp_cmd = app.add_subcommand("export-map", "Write a recovered map as CSV (dBm)");
  exp_cmd->add_option("--result", exp.result, "Result file")->required();
  exp_cmd->add_option("--format", exp.format, "long | slices")->check(CLI::IsMember({"long", "slices"}));
  exp_cmd->add_option("--out", exp.out, "CSV output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(SPM_ERR_SCHEMA);
  }

  try {
    if (*validate) run_validate(validate_path);
    else if (*dict_cmd) run_dict_build(dict);
    else if (*plan_cmd) run_plan(plan);
    else if (*meas_cmd) run_measure(meas);
    else if (*rec_cmd) run_recover(rec);
    else if (*eval_cmd) run_evaluate(eval);
    else if (*exp_cmd) run_export(exp);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error[%s]: %s\n", category(f.status), spm_last_error());
    return static_cast<int>(f.status);
  }
  return 0;
}
