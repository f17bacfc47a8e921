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

#include "gatenet/train/config.hpp"

#include <algorithm>
#include <cmath>

#include "gatenet/error.hpp"
#include "gatenet/nn/network.hpp"

namespace gatenet::train {

void TrainConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw UsageError("lambda must be >= 0");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw UsageError("eta must be >= 0");
  if (!(learning_rate > 0.0)) throw UsageError("learning rate must be > 0");
  if (epochs < 0) throw UsageError("epochs must be >= 0");
  if (bptt_window < 1) throw UsageError("bptt window must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0)) {
    throw UsageError("invalid Adam hyperparameters");
  }
  const auto& names = nn::component_names();
  for (const auto& c : freeze) {
    if (std::find(names.begin(), names.end(), c) == names.end()) {
      throw UsageError("unknown component '" + c + "' in freeze set");
    }
  }
}

TrainConfig TrainConfig::first_pass_defaults() { return TrainConfig{}; }

TrainConfig TrainConfig::second_pass_defaults() {
  TrainConfig c;
  c.learning_rate = 1e-4;
  c.epochs = 200;
  c.eta = 1e-3;
  c.warmup_steps = 100;
  c.freeze = {"phi1", "phi2", "lstm", "phi3", "norm"};
  return c;
}

}  // namespace gatenet::train
