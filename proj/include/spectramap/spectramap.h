/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The spectramap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the spectramap library.
 *
 * Objects are opaque handles created by the *_load / *_build / *_create
 * functions and released with the matching *_free. Every call returns a
 * spm_status; on failure spm_last_error() describes what went wrong (the
 * message is per thread and valid until the next failing call).
 *
 * Units: meters, watts, hertz. Maps exported by spm_export_map are in dBm.
 */
#ifndef SPECTRAMAP_SPECTRAMAP_H
#define SPECTRAMAP_SPECTRAMAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(SPECTRAMAP_BUILDING)
#define SPM_API __attribute__((visibility("default")))
#else
#define SPM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status values double as the CLI exit codes. */
typedef enum spm_status {
  SPM_OK = 0,
  SPM_ERR_SCHEMA = 2,    /* invalid argument, malformed or out-of-range input */
  SPM_ERR_NUMERICAL = 3, /* factorization failure, divergence, non-finite values */
  SPM_ERR_IO = 4,        /* file could not be opened, read or written */
  SPM_ERR_INTERNAL = 5
} spm_status;

typedef struct spm_scenario spm_scenario;
typedef struct spm_dictionary spm_dictionary;
typedef struct spm_plan spm_plan;
typedef struct spm_measurements spm_measurements;
typedef struct spm_result spm_result;

SPM_API const char* spm_version(void);
SPM_API const char* spm_last_error(void);

/* ---- scenario ---- */

typedef enum spm_preset { SPM_PRESET_DEFAULT = 0, SPM_PRESET_BOX = 1 } spm_preset;

SPM_API spm_status spm_scenario_load(const char* path, spm_scenario** out);
SPM_API spm_status spm_scenario_preset(spm_preset preset, spm_scenario** out);
SPM_API spm_status spm_scenario_save(const spm_scenario* scenario, const char* path);
SPM_API spm_status spm_scenario_cube_count(const spm_scenario* scenario, size_t* out);
/* Replaces the transmitters with `count` random ones of `power_watts` each,
 * at free cube centers (grid != 0) or continuous positions (grid == 0). */
SPM_API spm_status spm_scenario_random_transmitters(spm_scenario* scenario, int count, double power_watts,
                                                    uint64_t seed, int grid);
SPM_API void spm_scenario_free(spm_scenario* scenario);

/* ---- dictionary ---- */

typedef enum spm_dict_kind { SPM_DICT_FULL_RT = 0, SPM_DICT_SPARSE_RT_IDW = 1, SPM_DICT_FREE_SPACE = 2 } spm_dict_kind;

typedef struct spm_dict_options {
  spm_dict_kind kind;
  double fraction;     /* rho, sparse mode only */
  double idw_exponent; /* p */
  uint64_t seed;       /* anchor selection */
  int cube_distance;   /* 0: index-space IDW distance, 1: meters */
  int idw_neighbors;   /* 0: every anchor */
} spm_dict_options;

SPM_API void spm_dict_options_default(spm_dict_options* options);
SPM_API spm_status spm_dictionary_build(const spm_scenario* scenario, const spm_dict_options* options,
                                        unsigned jobs, spm_dictionary** out);
SPM_API spm_status spm_dictionary_load(const char* path, spm_dictionary** out);
SPM_API spm_status spm_dictionary_save(const spm_dictionary* dict, const char* path);
/* i, j, gain_db */
SPM_API spm_status spm_dictionary_export_csv(const spm_dictionary* dict, const char* path);
SPM_API spm_status spm_dictionary_size(const spm_dictionary* dict, size_t* out);
/* Linear gain from transmitting cube j to receiving cube i. */
SPM_API spm_status spm_dictionary_gain(const spm_dictionary* dict, size_t i, size_t j, double* out);
SPM_API void spm_dictionary_free(spm_dictionary* dict);

/* ---- sampling plans ---- */

SPM_API spm_status spm_plan_random(size_t cube_count, size_t samples, uint64_t seed, spm_plan** out);
SPM_API spm_status spm_plan_mmi(const spm_dictionary* dict, size_t samples, spm_plan** out);
/* M = round(rate * N), at least 1. */
SPM_API spm_status spm_samples_for_rate(size_t cube_count, double rate, size_t* out);
SPM_API spm_status spm_plan_load(const char* path, spm_plan** out);
SPM_API spm_status spm_plan_save(const spm_plan* plan, const char* path);
SPM_API spm_status spm_plan_size(const spm_plan* plan, size_t* out);
/* Copies min(capacity, size) indices. */
SPM_API spm_status spm_plan_indices(const spm_plan* plan, size_t* indices, size_t capacity);
SPM_API void spm_plan_free(spm_plan* plan);

/* ---- measurements ---- */

/* Samples the ground-truth map of the scenario's transmitters (ray traced,
 * or free space when free_space != 0) at the plan's cubes and adds
 * Gaussian noise of the scenario's variance. */
SPM_API spm_status spm_measure(const spm_scenario* scenario, const spm_plan* plan, uint64_t seed, int free_space,
                               spm_measurements** out);
SPM_API spm_status spm_measurements_create(const double* values_watts, size_t count, double noise_variance,
                                           spm_measurements** out);
SPM_API spm_status spm_measurements_load(const char* path, spm_measurements** out);
SPM_API spm_status spm_measurements_save(const spm_measurements* meas, const spm_plan* plan, const char* path);
SPM_API void spm_measurements_free(spm_measurements* meas);

/* ---- recovery ---- */

typedef enum spm_solver { SPM_SOLVER_SBL = 0, SPM_SOLVER_SWOMP = 1 } spm_solver;

typedef struct spm_recovery_options {
  spm_solver solver;
  int clustering;       /* sparsify + MMD clustering + refinement */
  int adaptive_prune;   /* mean - std threshold; otherwise prune_threshold */
  double prune_threshold;
  double delta_db;      /* sparsify threshold, < 0 */
  double theta;         /* MMD fraction, (0, 1) */
  int max_iters;
  double convergence_tol;
  double a, b, c, d;    /* Gamma hyperpriors */
  double swomp_weak;    /* SWOMP weak selection parameter */
} spm_recovery_options;

/* Fills the options behind one of the named algorithms (Random-SBL,
 * Random-CSBL, Random-MSBL, MMI-SBL, MMI-CMSBL, Random-SWOMP). When the
 * name asks for the ray-traced dictionary *uses_rt is set to 1, when it
 * asks for MMI sampling *uses_mmi is set to 1; either pointer may be NULL. */
SPM_API spm_status spm_recovery_options_for(const char* algorithm, spm_recovery_options* options, int* uses_rt,
                                            int* uses_mmi);
SPM_API spm_status spm_recover(const spm_scenario* scenario, const spm_dictionary* dict, const spm_plan* plan,
                               const spm_measurements* meas, const spm_recovery_options* options,
                               const char* method_tag, spm_result** out);
SPM_API spm_status spm_result_save(const spm_result* result, const char* path);
/* Copies min(capacity, N) entries of the recovered map (watts). */
SPM_API spm_status spm_result_map(const spm_result* result, double* values, size_t capacity);
/* Copies min(capacity, N) entries of the sparse estimate (watts). */
SPM_API spm_status spm_result_omega(const spm_result* result, double* values, size_t capacity);
SPM_API void spm_result_free(spm_result* result);

/* ---- files ---- */

/* format: "long" or "slices". */
SPM_API spm_status spm_export_map(const char* result_path, const char* format, const char* out_path);
/* Runs the sweep described by the experiment file and writes records.csv,
 * summary.json, curves_vs_rate.csv and curves_vs_k.csv into out_dir.
 * record_count may be NULL. */
SPM_API spm_status spm_evaluate(const char* spec_path, const char* out_dir, unsigned jobs, size_t* record_count);

/* ---- metrics ---- */

SPM_API spm_status spm_sample_complexity(size_t cube_count, size_t sparsity, size_t* out);

#ifdef __cplusplus
}
#endif

#endif
