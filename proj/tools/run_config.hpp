// Copyright 2026 The gatenet Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Resolved settings of one CLI invocation. Every command writes the
// resolved config next to its outputs; feeding that file back through
// --config reproduces the run.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gatenet/sim/dataset.hpp"
#include "gatenet/train/config.hpp"

namespace gatenet::cli {

struct RunConfig {
  std::string command;
  std::string model = "tnnp2004";
  std::string variant = "epi";
  std::string scenario = "control";

  // Dataset grid and integration.
  double cl_min = 300.0, cl_max = 800.0, cl_step = 5.0;  // ms
  double duration = 20000.0;                             // ms per segment
  double discard = 10000.0;                              // ms
  double dt_inner = 0.02;                                // ms
  double dt = 1.0;                                       // ms, sampling / network step
  double train_fraction = 76.0 / 101.0;
  std::uint64_t seed = 1;
  std::size_t threads = 0;

  train::TrainConfig train;
  std::vector<double> etas{1e-4, 5e-4, 1e-3, 2e-3};

  // Neural-ODE evaluation.
  double eval_cycle_length = 600.0;  // ms
  double eval_duration = 3000.0;     // ms recorded
  double eval_pacing = 10000.0;      // ms of host pacing for the initial state
  std::size_t eval_beats = 3;        // beats averaged in the metrics

  std::filesystem::path output;
  std::filesystem::path dataset;
  std::filesystem::path checkpoint;
  std::filesystem::path control;
  std::filesystem::path perturbed;

  // Throws UsageError for inconsistent settings.
  void validate() const;

  sim::DatasetOptions dataset_options() const;
};

// Defaults for a subcommand (pass-2 training settings for retrain/sweep).
RunConfig default_config(const std::string& command);

nlohmann::json to_json(const RunConfig& cfg);
// Overlays the fields present in `j` onto `cfg`. Unknown keys are rejected.
void merge_json(RunConfig& cfg, const nlohmann::json& j);

RunConfig load_run_config(const std::filesystem::path& path, const std::string& command);
void save_run_config(const std::filesystem::path& path, const RunConfig& cfg);

}  // namespace gatenet::cli
