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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gatenet/model/ionic_model.hpp"
#include "gatenet/nn/layers.hpp"
#include "gatenet/sim/trajectory.hpp"

namespace gatenet::nn {

// Sizes of the fixed architecture
//   v -> phi1 (dense x2) -> x -> GNN -> gates
//   [v, gates] -> phi2 -> LSTM -> phi3 -> others
struct NetworkShape {
  std::size_t observables = 2;
  std::size_t gates = 10;
  std::size_t others = 7;
  std::size_t width = 30;       // phi1 and phi2 layer width (n_x = width)
  std::size_t lstm_width = 30;
  std::size_t phi1_layers = 2;

  bool operator==(const NetworkShape&) const = default;
};

// Per-variable affine scaling x_norm = (x - shift) / scale for observable
// inputs and for the LSTM-branch targets.
struct Normalization {
  std::vector<double> obs_shift, obs_scale;
  std::vector<double> other_shift, other_scale;

  bool operator==(const Normalization&) const = default;
};

struct Provenance {
  std::uint64_t seed = 0;
  double lambda = 0.0;
  double eta = 0.0;
  int pass = 0;  // 0 = untrained, 1 = first pass, 2 = retrained

  bool operator==(const Provenance&) const = default;
};

// A trainable tensor together with its role.
struct ParamRef {
  std::string name;
  std::string component;   // phi1, gnn, phi2, lstm, phi3
  bool weight_matrix;      // regularized when true
  Tensor* tensor;
};

struct ConstParamRef {
  std::string name;
  std::string component;
  bool weight_matrix;
  const Tensor* tensor;
};

struct NetworkParams {
  std::string model_key;
  std::vector<std::string> variable_names;
  model::StatePartition partition;
  NetworkShape shape;
  std::vector<DenseLayer> phi1;
  GnnLayer gnn;
  DenseLayer phi2;
  LstmLayer lstm;
  DenseLayer phi3;
  Normalization norm;
  double dt = 1.0;  // ms per step
  Provenance provenance;

  // Tensors in a fixed canonical order.
  std::vector<ParamRef> tensors();
  std::vector<ConstParamRef> tensors() const;

  // Positions of the observables within the LSTM-branch output.
  std::vector<std::size_t> observable_slots() const { return partition.observable_slots(); }

  // Same shape, every tensor zero (gradient accumulator).
  NetworkParams zeros_like() const;

  bool operator==(const NetworkParams&) const = default;
};

// Component names accepted by freeze masks.
const std::vector<std::string>& component_names();

struct NetworkState {
  std::vector<double> gnn_h;
  std::vector<double> lstm_hidden;
  std::vector<double> lstm_cell;

  // gnn_h <- initial_gates (or zeros when empty); LSTM state zeroed.
  void reset(const NetworkShape& shape, std::span<const double> initial_gates = {});
  bool operator==(const NetworkState&) const = default;
};

// Builds a network for the model's partition with Glorot-uniform weights,
// zero biases except b_tau = +2 (initial rho ~ 0.88) and LSTM forget bias +1.
NetworkParams init_network(const model::IonicModel& model, std::uint64_t seed,
                           std::size_t width = 30, std::size_t lstm_width = 30);
NetworkParams init_network(const NetworkShape& shape, std::uint64_t seed);

// Min-max scaling over the given segments for observables and LSTM-branch
// variables; gate-like variables keep shift 0 / scale 1.
Normalization compute_normalization(const model::IonicModel& model,
                                    std::span<const sim::Trajectory* const> segments);

struct StepOutput {
  std::vector<double> gates;   // natural [0,1] units
  std::vector<double> others;  // denormalized LSTM-branch prediction
};

// Everything the backward pass needs from one forward step.
struct StepCache {
  std::vector<double> v;                   // normalized input
  std::vector<std::vector<double>> phi1;   // outputs of each phi1 layer (last = x)
  std::vector<double> h_inf, rho, h_prev, h;
  std::vector<double> z_in, z;             // phi2 input [v, h] and output
  std::vector<double> lstm_h_prev, lstm_c_prev;
  LstmActivations lstm;
  std::vector<double> lstm_h;
  std::vector<double> others;              // normalized phi3 output
};

// One step in normalized space. Updates `state`; fills `cache` if non-null.
// gates_out/others_out receive the GNN output and normalized phi3 output.
void forward_step(const NetworkParams& params, std::span<const double> v_norm,
                  NetworkState& state, std::span<double> gates_out,
                  std::span<double> others_out, StepCache* cache = nullptr);

// GNN branch only (phi1 + GNN), advancing state.gnn_h.
void forward_gates(const NetworkParams& params, std::span<const double> v_norm,
                   std::span<double> gnn_h);

void normalize_observables(const NetworkParams& params, std::span<const double> v,
                           std::span<double> out);
void normalize_others(const NetworkParams& params, std::span<const double> h_tilde,
                      std::span<double> out);
void denormalize_others(const NetworkParams& params, std::span<const double> norm,
                        std::span<double> out);

// v(t) -> (gates, others) at t + dt. `v` is in physical units. Throws
// UsageError on a dimension mismatch.
StepOutput network_step(std::span<const double> v, const NetworkParams& params,
                        NetworkState& state);

// Closed loop: the observable slots of each prediction feed the next step.
// Returns n_steps observable vectors; throws NumericalError("rollout
// diverged at step i") on non-finite output.
std::vector<std::vector<double>> rollout(std::span<const double> v0, std::size_t n_steps,
                                         const NetworkParams& params, NetworkState& state);

}  // namespace gatenet::nn
