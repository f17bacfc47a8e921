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

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>

namespace gatenet::train {

struct TrainConfig {
  double lambda = 1e-4;
  double eta = 0.0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int epochs = 100;
  std::size_t bptt_window = 50;
  // Forward-only steps at the start of every segment before the loss is
  // accumulated (lets the LSTM state settle).
  std::size_t warmup_steps = 0;
  std::uint64_t seed = 0;
  std::set<std::string> freeze;
  std::size_t threads = 0;  // 0 = default

  // Throws UsageError on negative weights, an empty window, a negative
  // epoch count or unknown component names.
  void validate() const;

  bool frozen(const std::string& component) const { return freeze.count(component) != 0; }

  static TrainConfig first_pass_defaults();
  // Everything except the GNN frozen, lr 1e-4, 200 epochs.
  static TrainConfig second_pass_defaults();
};

}  // namespace gatenet::train
