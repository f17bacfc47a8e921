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

#include <functional>
#include <vector>

#include "gatenet/error.hpp"
#include "gatenet/model/ionic_model.hpp"
#include "gatenet/nn/network.hpp"
#include "gatenet/sim/dataset.hpp"
#include "gatenet/train/config.hpp"
#include "gatenet/train/loss.hpp"

namespace gatenet::train {

// Raised when a loss or gradient becomes non-finite. Carries the parameters
// from the last completed epoch.
class TrainingDivergedError : public NumericalError {
 public:
  TrainingDivergedError(int epoch, std::string what, nn::NetworkParams last_good);
  int epoch() const { return epoch_; }
  const nn::NetworkParams& last_good() const { return last_good_; }

 private:
  int epoch_;
  nn::NetworkParams last_good_;
};

struct TrainCallbacks {
  // Called after the initial evaluation (epoch 0) and after every epoch.
  std::function<void(const EpochRecord&, const nn::NetworkParams&)> on_epoch;
};

struct TrainResult {
  nn::NetworkParams params;
  LossReport report;
};

// Full-state training of every component. Normalization is fitted to the
// training segments. Inputs are the true observables (teacher forcing);
// the GNN state starts from the true gates of each segment's first sample.
TrainResult train_first_pass(const model::IonicModel& model, const sim::Dataset& dataset,
                             const TrainConfig& config, const TrainCallbacks& callbacks = {});

// Observable-only retraining. Only columns named after the observables are
// read from the segments. The gate drift is measured against the pass-1
// network run on the same inputs; its gradient is not propagated.
TrainResult train_second_pass(const nn::NetworkParams& pass1, const sim::Dataset& dataset,
                              const TrainConfig& config, const TrainCallbacks& callbacks = {});

// Per-gate RMSE of the one-step gate prediction on the listed segments:
// from the true gates and observables at sample i, predict the gates at
// sample i + 1.
std::vector<double> one_step_gate_rmse(const nn::NetworkParams& params,
                                       const sim::Dataset& dataset,
                                       const std::vector<std::size_t>& indices);

}  // namespace gatenet::train
