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

#include <set>
#include <span>
#include <string>

#include "gatenet/nn/network.hpp"
#include "gatenet/train/loss.hpp"

namespace gatenet::train {

// One BPTT window of a single sequence, row-major per step, all in
// normalized network units. Step i maps inputs[i] to the targets of step
// i + 1 of the underlying trajectory.
//   first pass:  gate_targets = true gates, other_targets = every LSTM-branch variable
//   second pass: gate_targets = reference gates, other_targets = observables only
struct Window {
  std::size_t steps = 0;
  std::span<const double> inputs;
  std::span<const double> gate_targets;
  std::span<const double> other_targets;
};

// Raw sums accumulated over a window.
struct WindowSums {
  double gate = 0.0;   // sum of squared (first) or absolute (second) gate errors
  double other = 0.0;  // sum of squared errors on the LSTM-branch targets
  std::size_t gate_count = 0;
  std::size_t other_count = 0;

  WindowSums& operator+=(const WindowSums& o);
};

// Weights applied to the raw sums inside the loss,
//   loss = gate_weight * sums.gate + other_weight * sums.other.
struct SumWeights {
  double gate = 0.0;
  double other = 0.0;
};

// Runs the window forward from `state` (left at the end state) and, when
// `grad` is non-null, accumulates the exact gradient of the weighted sums
// into it. Gradient flow is truncated at the window start. Frozen
// components receive no gradient. Does not include the regularizer.
WindowSums window_backprop(const nn::NetworkParams& params, nn::NetworkState& state,
                           const Window& window, LossKind kind, const SumWeights& weights,
                           const std::set<std::string>& freeze, nn::NetworkParams* grad);

// grad += lambda * d reg / d params.
void add_regularization_gradient(const nn::NetworkParams& params, double lambda,
                                 const std::set<std::string>& freeze, nn::NetworkParams& grad);

// Throws NumericalError("non-finite gradient in <tensor>").
void check_gradient(const nn::NetworkParams& grad);

struct WindowGradient {
  nn::NetworkParams grad;
  LossTerms loss;
};

// Loss and gradient of a single window with every term averaged as in
// first_pass_loss / second_pass_loss. `state` is the state at the window
// start and is not modified.
WindowGradient gradient(const nn::NetworkParams& params, const nn::NetworkState& state,
                        const Window& window, LossKind kind, double lambda, double eta,
                        const std::set<std::string>& freeze = {});

}  // namespace gatenet::train
