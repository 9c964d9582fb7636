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

#include "spectramap/spectramap.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <random>
#include <string>

#include "dictionary.hpp"
#include "error.hpp"
#include "evaluation.hpp"
#include "io.hpp"
#include "pipeline.hpp"
#include "sampling.hpp"
#include "scenario.hpp"

struct spm_scenario {
  spectramap::ScenarioConfig cfg;
  spectramap::RtParams rt;
};

struct spm_dictionary {
  spectramap::GainDictionary dict;
};

struct spm_plan {
  spectramap::SamplingPlan plan;
};

struct spm_measurements {
  spectramap::MeasurementVector meas;
};

struct spm_result {
  spectramap::ScenarioConfig cfg;
  spectramap::RecoveryOptions options;
  spectramap::RecoveredMap map;
};

namespace {

thread_local std::string g_last_error;

spm_status status_of(spectramap::ErrorKind kind) {
  switch (kind) {
    case spectramap::ErrorKind::InvalidArgument:
    case spectramap::ErrorKind::Domain: return SPM_ERR_SCHEMA;
    case spectramap::ErrorKind::Numerical: return SPM_ERR_NUMERICAL;
    case spectramap::ErrorKind::Io: return SPM_ERR_IO;
  }
  return SPM_ERR_INTERNAL;
}

template <typename Fn>
spm_status guarded(Fn&& fn) {
  try {
    fn();
    return SPM_OK;
  } catch (const spectramap::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SPM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SPM_ERR_INTERNAL;
  }
}

#define SPM_NEED(ptr)                                                              \
  do {                                                                             \
    if (!(ptr)) spectramap::fail(spectramap::ErrorKind::InvalidArgument, #ptr " is null"); \
  } while (0)

spectramap::RecoveryOptions to_native(const spm_recovery_options& o) {
  spectramap::RecoveryOptions r;
  r.solver = o.solver == SPM_SOLVER_SWOMP ? spectramap::Solver::Swomp : spectramap::Solver::Sbl;
  r.clustering = o.clustering != 0;
  r.hyper.prune = o.adaptive_prune ? spectramap::PruneMode::adaptive() : spectramap::PruneMode::fixed(o.prune_threshold);
  r.delta_db = o.delta_db;
  r.theta = o.theta;
  r.hyper.max_iters = o.max_iters;
  r.hyper.convergence_tol = o.convergence_tol;
  r.hyper.a = o.a;
  r.hyper.b = o.b;
  r.hyper.c = o.c;
  r.hyper.d = o.d;
  r.swomp.weak_param = o.swomp_weak;
  return r;
}

spm_recovery_options from_native(const spectramap::RecoveryOptions& r) {
  spm_recovery_options o{};
  o.solver = r.solver == spectramap::Solver::Swomp ? SPM_SOLVER_SWOMP : SPM_SOLVER_SBL;
  o.clustering = r.clustering ? 1 : 0;
  o.adaptive_prune = r.hyper.prune.kind == spectramap::PruneMode::Kind::Adaptive ? 1 : 0;
  o.prune_threshold = r.hyper.prune.threshold;
  o.delta_db = r.delta_db;
  o.theta = r.theta;
  o.max_iters = r.hyper.max_iters;
  o.convergence_tol = r.hyper.convergence_tol;
  o.a = r.hyper.a;
  o.b = r.hyper.b;
  o.c = r.hyper.c;
  o.d = r.hyper.d;
  o.swomp_weak = r.swomp.weak_param;
  return o;
}

void copy_out(const Eigen::VectorXd& v, double* out, std::size_t capacity) {
  const auto n = std::min<std::size_t>(capacity, static_cast<std::size_t>(v.size()));
  for (std::size_t i = 0; i < n; ++i) out[i] = v[static_cast<Eigen::Index>(i)];
}

}  // namespace

extern "C" {

const char* spm_version(void) { return "0.1.0"; }

const char* spm_last_error(void) { return g_last_error.c_str(); }

// ---- scenario ----

spm_status spm_scenario_load(const char* path, spm_scenario** out) {
  return guarded([&] {
    SPM_NEED(path);
    SPM_NEED(out);
    auto file = spectramap::io::load_scenario(path);
    *out = new spm_scenario{std::move(file.scenario), file.rt};
  });
}

spm_status spm_scenario_preset(spm_preset preset, spm_scenario** out) {
  return guarded([&] {
    SPM_NEED(out);
    if (preset == SPM_PRESET_DEFAULT) *out = new spm_scenario{spectramap::default_scenario(), {}};
    else if (preset == SPM_PRESET_BOX) *out = new spm_scenario{spectramap::box_scenario(), {}};
    else spectramap::fail(spectramap::ErrorKind::InvalidArgument, "unknown scenario preset");
  });
}

spm_status spm_scenario_save(const spm_scenario* scenario, const char* path) {
  return guarded([&] {
    SPM_NEED(scenario);
    SPM_NEED(path);
    spectramap::io::save_scenario(path, scenario->cfg, scenario->rt);
  });
}

spm_status spm_scenario_cube_count(const spm_scenario* scenario, size_t* out) {
  return guarded([&] {
    SPM_NEED(scenario);
    SPM_NEED(out);
    *out = scenario->cfg.cube_count();
  });
}

spm_status spm_scenario_random_transmitters(spm_scenario* scenario, int count, double power_watts, uint64_t seed,
                                            int grid) {
  return guarded([&] {
    SPM_NEED(scenario);
    spectramap::require(power_watts > 0.0, "transmit power must be > 0");
    std::mt19937_64 rng(seed);
    scenario->cfg.transmitters = grid ? spectramap::random_grid_transmitters(scenario->cfg, count, power_watts, rng)
                                      : spectramap::random_transmitters(scenario->cfg, count, power_watts, rng);
  });
}

void spm_scenario_free(spm_scenario* scenario) { delete scenario; }

// ---- dictionary ----

void spm_dict_options_default(spm_dict_options* options) {
  if (!options) return;
  const spectramap::DictionaryMode mode;
  options->kind = static_cast<spm_dict_kind>(mode.kind);
  options->fraction = mode.fraction;
  options->idw_exponent = mode.idw_exponent;
  options->seed = mode.seed;
  options->cube_distance = mode.metric == spectramap::IdwMetric::CubeDistance ? 1 : 0;
  options->idw_neighbors = mode.idw_neighbors;
}

spm_status spm_dictionary_build(const spm_scenario* scenario, const spm_dict_options* options, unsigned jobs,
                                spm_dictionary** out) {
  return guarded([&] {
    SPM_NEED(scenario);
    SPM_NEED(options);
    SPM_NEED(out);
    spectramap::require(options->kind >= SPM_DICT_FULL_RT && options->kind <= SPM_DICT_FREE_SPACE,
                        "unknown dictionary kind");
    spectramap::DictionaryMode mode;
    mode.kind = static_cast<spectramap::DictionaryKind>(options->kind);
    mode.fraction = options->fraction;
    mode.idw_exponent = options->idw_exponent;
    mode.seed = options->seed;
    mode.metric = options->cube_distance ? spectramap::IdwMetric::CubeDistance : spectramap::IdwMetric::IndexSpace;
    mode.idw_neighbors = options->idw_neighbors;
    *out = new spm_dictionary{spectramap::build_dictionary(scenario->cfg, scenario->rt, mode, jobs)};
  });
}

spm_status spm_dictionary_load(const char* path, spm_dictionary** out) {
  return guarded([&] {
    SPM_NEED(path);
    SPM_NEED(out);
    *out = new spm_dictionary{spectramap::io::load_dictionary(path)};
  });
}

spm_status spm_dictionary_save(const spm_dictionary* dict, const char* path) {
  return guarded([&] {
    SPM_NEED(dict);
    SPM_NEED(path);
    spectramap::io::save_dictionary(path, dict->dict);
  });
}

spm_status spm_dictionary_export_csv(const spm_dictionary* dict, const char* path) {
  return guarded([&] {
    SPM_NEED(dict);
    SPM_NEED(path);
    spectramap::io::export_dictionary_csv(path, dict->dict);
  });
}

spm_status spm_dictionary_size(const spm_dictionary* dict, size_t* out) {
  return guarded([&] {
    SPM_NEED(dict);
    SPM_NEED(out);
    *out = dict->dict.size();
  });
}

spm_status spm_dictionary_gain(const spm_dictionary* dict, size_t i, size_t j, double* out) {
  return guarded([&] {
    SPM_NEED(dict);
    SPM_NEED(out);
    spectramap::require(i < dict->dict.size() && j < dict->dict.size(), "dictionary index out of range");
    *out = dict->dict.gains(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
}

void spm_dictionary_free(spm_dictionary* dict) { delete dict; }

// ---- plans ----

spm_status spm_plan_random(size_t cube_count, size_t samples, uint64_t seed, spm_plan** out) {
  return guarded([&] {
    SPM_NEED(out);
    *out = new spm_plan{spectramap::random_plan(cube_count, samples, seed)};
  });
}

spm_status spm_plan_mmi(const spm_dictionary* dict, size_t samples, spm_plan** out) {
  return guarded([&] {
    SPM_NEED(dict);
    SPM_NEED(out);
    *out = new spm_plan{spectramap::greedy_mmi_plan(dict->dict.gains, samples)};
  });
}

spm_status spm_samples_for_rate(size_t cube_count, double rate, size_t* out) {
  return guarded([&] {
    SPM_NEED(out);
    spectramap::require(cube_count >= 1, "cube count must be >= 1");
    spectramap::require(rate > 0.0 && rate <= 1.0, "rate must be in (0, 1]");
    const auto m = static_cast<size_t>(std::llround(rate * static_cast<double>(cube_count)));
    *out = std::clamp<size_t>(m, 1, cube_count);
  });
}

spm_status spm_plan_load(const char* path, spm_plan** out) {
  return guarded([&] {
    SPM_NEED(path);
    SPM_NEED(out);
    *out = new spm_plan{spectramap::io::load_plan(path)};
  });
}

spm_status spm_plan_save(const spm_plan* plan, const char* path) {
  return guarded([&] {
    SPM_NEED(plan);
    SPM_NEED(path);
    spectramap::io::save_plan(path, plan->plan);
  });
}

spm_status spm_plan_size(const spm_plan* plan, size_t* out) {
  return guarded([&] {
    SPM_NEED(plan);
    SPM_NEED(out);
    *out = plan->plan.size();
  });
}

spm_status spm_plan_indices(const spm_plan* plan, size_t* indices, size_t capacity) {
  return guarded([&] {
    SPM_NEED(plan);
    SPM_NEED(indices);
    const auto n = std::min(capacity, plan->plan.size());
    std::copy_n(plan->plan.indices.begin(), n, indices);
  });
}

void spm_plan_free(spm_plan* plan) { delete plan; }

// ---- measurements ----

spm_status spm_measure(const spm_scenario* scenario, const spm_plan* plan, uint64_t seed, int free_space,
                       spm_measurements** out) {
  return guarded([&] {
    SPM_NEED(scenario);
    SPM_NEED(plan);
    SPM_NEED(out);
    spectramap::require(plan->plan.cube_count == scenario->cfg.cube_count(), "plan does not match the scenario grid");
    const Eigen::VectorXd truth = spectramap::ground_truth_map(scenario->cfg, scenario->rt, free_space != 0);
    *out = new spm_measurements{spectramap::measure(truth, plan->plan, scenario->cfg.noise_variance, seed)};
  });
}

spm_status spm_measurements_create(const double* values_watts, size_t count, double noise_variance,
                                   spm_measurements** out) {
  return guarded([&] {
    SPM_NEED(values_watts);
    SPM_NEED(out);
    spectramap::require(noise_variance >= 0.0, "noise variance must be >= 0");
    spectramap::MeasurementVector m;
    m.values = Eigen::Map<const Eigen::VectorXd>(values_watts, static_cast<Eigen::Index>(count));
    spectramap::require(m.values.allFinite(), "measurements must be finite");
    m.noise_variance = noise_variance;
    *out = new spm_measurements{std::move(m)};
  });
}

spm_status spm_measurements_load(const char* path, spm_measurements** out) {
  return guarded([&] {
    SPM_NEED(path);
    SPM_NEED(out);
    *out = new spm_measurements{spectramap::io::load_measurements(path)};
  });
}

spm_status spm_measurements_save(const spm_measurements* meas, const spm_plan* plan, const char* path) {
  return guarded([&] {
    SPM_NEED(meas);
    SPM_NEED(plan);
    SPM_NEED(path);
    spectramap::require(static_cast<size_t>(meas->meas.values.size()) == plan->plan.size(),
                        "measurement count does not match the plan");
    spectramap::io::save_measurements(path, meas->meas, plan->plan);
  });
}

void spm_measurements_free(spm_measurements* meas) { delete meas; }

// ---- recovery ----

spm_status spm_recovery_options_for(const char* algorithm, spm_recovery_options* options, int* uses_rt,
                                    int* uses_mmi) {
  return guarded([&] {
    SPM_NEED(algorithm);
    SPM_NEED(options);
    const auto spec = spectramap::algorithm_from_name(algorithm);
    *options = from_native(spec.recovery);
    if (uses_rt) *uses_rt = spec.rt_dictionary ? 1 : 0;
    if (uses_mmi) *uses_mmi = spec.sampler == spectramap::SamplingMethod::Mmi ? 1 : 0;
  });
}

spm_status spm_recover(const spm_scenario* scenario, const spm_dictionary* dict, const spm_plan* plan,
                       const spm_measurements* meas, const spm_recovery_options* options, const char* method_tag,
                       spm_result** out) {
  return guarded([&] {
    SPM_NEED(scenario);
    SPM_NEED(dict);
    SPM_NEED(plan);
    SPM_NEED(meas);
    SPM_NEED(options);
    SPM_NEED(out);
    spectramap::require(dict->dict.grid == scenario->cfg.grid, "dictionary grid does not match the scenario");
    const auto native = to_native(*options);
    auto map = spectramap::recover(scenario->cfg, dict->dict.gains, plan->plan, meas->meas, native,
                                   method_tag ? method_tag : "custom");
    *out = new spm_result{scenario->cfg, native, std::move(map)};
  });
}

spm_status spm_result_save(const spm_result* result, const char* path) {
  return guarded([&] {
    SPM_NEED(result);
    SPM_NEED(path);
    spectramap::io::save_result(path, result->cfg, result->map, result->options);
  });
}

spm_status spm_result_map(const spm_result* result, double* values, size_t capacity) {
  return guarded([&] {
    SPM_NEED(result);
    SPM_NEED(values);
    copy_out(result->map.x_hat, values, capacity);
  });
}

spm_status spm_result_omega(const spm_result* result, double* values, size_t capacity) {
  return guarded([&] {
    SPM_NEED(result);
    SPM_NEED(values);
    copy_out(result->map.omega_star, values, capacity);
  });
}

void spm_result_free(spm_result* result) { delete result; }

// ---- files ----

spm_status spm_export_map(const char* result_path, const char* format, const char* out_path) {
  return guarded([&] {
    SPM_NEED(result_path);
    SPM_NEED(format);
    SPM_NEED(out_path);
    const auto fmt = spectramap::io::map_format_from_name(format);
    const auto result = spectramap::io::load_result(result_path);
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) spectramap::fail(spectramap::ErrorKind::Io, std::string("cannot open '") + out_path + "' for writing");
    spectramap::io::export_map(out, result, fmt);
    out.flush();
    if (!out) spectramap::fail(spectramap::ErrorKind::Io, std::string("write to '") + out_path + "' failed");
  });
}

spm_status spm_evaluate(const char* spec_path, const char* out_dir, unsigned jobs, size_t* record_count) {
  return guarded([&] {
    SPM_NEED(spec_path);
    SPM_NEED(out_dir);
    auto spec = spectramap::io::load_experiment(spec_path);
    spec.jobs = jobs == 0 ? 1 : jobs;
    const auto records = spectramap::run_experiment(spec);
    spectramap::io::save_experiment_outputs(out_dir, records);
    if (record_count) *record_count = records.size();
  });
}

spm_status spm_sample_complexity(size_t cube_count, size_t sparsity, size_t* out) {
  return guarded([&] {
    SPM_NEED(out);
    *out = spectramap::sample_complexity_bound(cube_count, sparsity);
  });
}

}  // extern "C"
