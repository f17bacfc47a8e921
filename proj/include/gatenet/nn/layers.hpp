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

#include <span>
#include <string_view>
#include <vector>

#include "gatenet/nn/tensor.hpp"

namespace gatenet::nn {

enum class Activation { kIdentity, kTanh, kSigmoid };

std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view name);

// Applies the activation in place.
void activate(Activation a, std::span<double> x);

// Derivative of the activation expressed through its output y.
double activation_grad(Activation a, double y);

struct DenseLayer {
  Tensor weight;  // out x in
  Tensor bias;    // out x 1
  Activation activation = Activation::kIdentity;

  DenseLayer() = default;
  DenseLayer(std::size_t in, std::size_t out, Activation act);

  std::size_t inputs() const { return weight.cols; }
  std::size_t outputs() const { return weight.rows; }

  // y = act(W x + b).
  void forward(std::span<const double> x, std::span<double> y) const;
  bool operator==(const DenseLayer&) const = default;
};

// Weights of the gating layer. h_inf and rho are computed from the input
// only; the recurrent state h never feeds back into either head.
struct GnnLayer {
  Tensor w_inf;  // gates x inputs
  Tensor b_inf;  // gates x 1
  Tensor w_tau;  // gates x inputs
  Tensor b_tau;  // gates x 1

  GnnLayer() = default;
  GnnLayer(std::size_t inputs, std::size_t gates);

  std::size_t inputs() const { return w_inf.cols; }
  std::size_t gates() const { return w_inf.rows; }
  bool operator==(const GnnLayer&) const = default;
};

// h_inf = sigmoid(W_inf x + b_inf).
void gnn_h_inf(const GnnLayer& layer, std::span<const double> x, std::span<double> out);
// rho = sigmoid(W_tau x + b_tau); rho = exp(-dt / tau).
void gnn_rho(const GnnLayer& layer, std::span<const double> x, std::span<double> out);
// h <- rho h + (1 - rho) h_inf, elementwise and in place.
void gnn_update(std::span<double> h, std::span<const double> rho,
                std::span<const double> h_inf);

// Gating layer together with its state vector.
struct GnnCell {
  GnnLayer layer;
  std::vector<double> h;

  // Advances h by one step of input x and returns the new gate vector.
  std::span<const double> step(std::span<const double> x);
};

// Forget-gate LSTM. Pre-activations are stacked [input, forget, candidate,
// output], each `hidden` rows.
struct LstmLayer {
  Tensor w_x;   // 4H x in
  Tensor w_h;   // 4H x H
  Tensor bias;  // 4H x 1

  LstmLayer() = default;
  LstmLayer(std::size_t in, std::size_t hidden);

  std::size_t inputs() const { return w_x.cols; }
  std::size_t hidden() const { return w_h.cols; }
  bool operator==(const LstmLayer&) const = default;
};

struct LstmActivations {
  std::vector<double> i, f, g, o;  // gate activations
  std::vector<double> c;           // new cell state
  std::vector<double> tanh_c;
};

// One LSTM step: updates (hidden, cell) in place. When `acts` is non-null
// the gate activations are stored for backpropagation.
void lstm_step(const LstmLayer& layer, std::span<const double> x, std::span<double> hidden,
               std::span<double> cell, LstmActivations* acts = nullptr);

}  // namespace gatenet::nn
