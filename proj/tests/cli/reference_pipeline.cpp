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

// In-process dict-build -> plan -> recover -> export-map, for comparing
// against the command-line chain.
#include <cstdio>
#include <fstream>
#include <string>

#include "dictionary.hpp"
#include "io.hpp"
#include "pipeline.hpp"
#include "sampling.hpp"

using namespace spectramap;

int main(int argc, char** argv) {
  if (argc != 5) {
    std::fprintf(stderr, "usage: reference_pipeline SCENARIO RATE SEED OUT_CSV\n");
    return 2;
  }
  const auto file = io::load_scenario(argv[1]);
  const double rate = std::stod(argv[2]);
  const auto seed = std::stoull(argv[3]);

  const auto dict = build_dictionary(file.scenario, file.rt, DictionaryMode{});
  const auto n = file.scenario.cube_count();
  const auto m = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
  const auto plan = greedy_mmi_plan(dict.gains, m);
  const auto truth = ground_truth_map(file.scenario, file.rt);
  const auto meas = measure(truth, plan, file.scenario.noise_variance, seed);
  const auto algo = algorithm_from_name("MMI-CMSBL");
  const auto result = recover(file.scenario, dict.gains, plan, meas, algo.recovery, algo.name);

  io::ResultFile in_memory{result.method, file.scenario.roi_extent, file.scenario.grid, result.omega_star,
                           result.x_hat};
  std::ofstream out(argv[4], std::ios::binary);
  io::export_map(out, in_memory, io::MapFormat::Long);
  return out ? 0 : 4;
}
