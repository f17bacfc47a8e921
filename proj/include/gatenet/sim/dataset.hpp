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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gatenet/model/models.hpp"
#include "gatenet/sim/integrators.hpp"
#include "gatenet/sim/trajectory.hpp"

namespace gatenet::sim {

// Inclusive arithmetic range [first, last] with the given step; throws
// UsageError if first > last or step <= 0.
std::vector<double> cycle_length_range(double first, double last, double step);

struct DatasetOptions {
  std::vector<double> cycle_lengths;
  double duration = 20000.0;  // ms simulated per segment
  double discard = 10000.0;   // ms of initial transient dropped
  double dt_inner = 0.02;     // ms
  double dt_out = 1.0;        // ms
  // When unset, the model's conventional stimulus is used.
  double stimulus_amplitude = 0.0;
  double stimulus_duration = 0.0;
  bool default_stimulus = true;
  std::uint64_t seed = 1;
  // Fraction of segments used for training (76 of 101 by default).
  double train_fraction = 76.0 / 101.0;
  std::size_t threads = 0;
};

struct Dataset {
  std::string model_key;
  std::string scenario = "control";
  std::string variant = "epi";
  std::uint64_t seed = 1;
  double dt = 1.0;
  std::vector<Trajectory> segments;  // ordered by cycle length
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> validation_indices;

  std::size_t l() const { return segments.size(); }
};

// Seeded shuffle of [0, n) split into train/validation index lists (each
// sorted). n_train = round(n * train_fraction), at least one validation
// segment whenever n >= 2.
void split_indices(std::size_t n, double train_fraction, std::uint64_t seed,
                   std::vector<std::size_t>& train, std::vector<std::size_t>& validation);

PacingProtocol dataset_protocol(const model::IonicModel& model, const DatasetOptions& options,
                                double cycle_length);

// One segment per cycle length (integrated independently, possibly in
// parallel), transient discarded, recorded at dt_out, then split.
// Throws NumericalError naming the cycle length if a segment diverges.
Dataset generate_dataset(const model::IonicModel& model, const DatasetOptions& options);

// Writes manifest.json plus one CSV per segment into `dir`.
void save_dataset(const std::filesystem::path& dir, const Dataset& dataset,
                  const DatasetOptions& options);
Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace gatenet::sim
