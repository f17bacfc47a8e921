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

#include "gatenet/nn/layers.hpp"

#include <cmath>
#include <string>

#include "gatenet/error.hpp"
#include "gatenet/simd/kernels.hpp"

namespace gatenet::nn {

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kTanh: return "tanh";
    case Activation::kSigmoid: return "sigmoid";
  }
  return "identity";
}

Activation parse_activation(std::string_view name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "tanh") return Activation::kTanh;
  if (name == "sigmoid") return Activation::kSigmoid;
  throw DataError("unknown activation " + std::string(name));
}

void activate(Activation a, std::span<double> x) {
  switch (a) {
    case Activation::kIdentity: return;
    case Activation::kTanh:
      for (double& v : x) v = std::tanh(v);
      return;
    case Activation::kSigmoid:
      for (double& v : x) v = sigmoid(v);
      return;
  }
}

double activation_grad(Activation a, double y) {
  switch (a) {
    case Activation::kIdentity: return 1.0;
    case Activation::kTanh: return 1.0 - y * y;
    case Activation::kSigmoid: return y * (1.0 - y);
  }
  return 1.0;
}

DenseLayer::DenseLayer(std::size_t in, std::size_t out, Activation act)
    : weight(out, in), bias(out, 1), activation(act) {}

void DenseLayer::forward(std::span<const double> x, std::span<double> y) const {
  if (x.size() != inputs() || y.size() != outputs()) {
    throw UsageError("dense layer: dimension mismatch");
  }
  simd::kernels().gemv(weight.data.data(), weight.rows, weight.cols, x.data(),
                       bias.data.data(), y.data());
  activate(activation, y);
}

GnnLayer::GnnLayer(std::size_t inputs, std::size_t gates)
    : w_inf(gates, inputs), b_inf(gates, 1), w_tau(gates, inputs), b_tau(gates, 1) {}

namespace {

void sigmoid_head(const Tensor& w, const Tensor& b, std::span<const double> x,
                  std::span<double> out) {
  if (x.size() != w.cols || out.size() != w.rows) {
    throw UsageError("gating layer: dimension mismatch");
  }
  simd::kernels().gemv(w.data.data(), w.rows, w.cols, x.data(), b.data.data(), out.data());
  for (double& v : out) v = sigmoid(v);
}

}  // namespace

void gnn_h_inf(const GnnLayer& layer, std::span<const double> x, std::span<double> out) {
  sigmoid_head(layer.w_inf, layer.b_inf, x, out);
}

void gnn_rho(const GnnLayer& layer, std::span<const double> x, std::span<double> out) {
  sigmoid_head(layer.w_tau, layer.b_tau, x, out);
}

void gnn_update(std::span<double> h, std::span<const double> rho,
                std::span<const double> h_inf) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    h[i] = rho[i] * h[i] + (1.0 - rho[i]) * h_inf[i];
  }
}

std::span<const double> GnnCell::step(std::span<const double> x) {
  const std::size_t n = layer.gates();
  if (h.size() != n) throw UsageError("gating cell: state has wrong dimension");
  std::vector<double> h_inf(n), rho(n);
  gnn_h_inf(layer, x, h_inf);
  gnn_rho(layer, x, rho);
  gnn_update(h, rho, h_inf);
  return h;
}

LstmLayer::LstmLayer(std::size_t in, std::size_t hidden)
    : w_x(4 * hidden, in), w_h(4 * hidden, hidden), bias(4 * hidden, 1) {}

void lstm_step(const LstmLayer& layer, std::span<const double> x, std::span<double> hidden,
               std::span<double> cell, LstmActivations* acts) {
  const std::size_t n = layer.hidden();
  if (x.size() != layer.inputs() || hidden.size() != n || cell.size() != n) {
    throw UsageError("lstm: dimension mismatch");
  }
  const auto& k = simd::kernels();
  thread_local std::vector<double> pre, rec;
  pre.resize(4 * n);
  rec.resize(4 * n);
  k.gemv(layer.w_x.data.data(), 4 * n, layer.inputs(), x.data(), layer.bias.data.data(),
         pre.data());
  k.gemv(layer.w_h.data.data(), 4 * n, n, hidden.data(), nullptr, rec.data());
  for (std::size_t r = 0; r < 4 * n; ++r) pre[r] += rec[r];

  thread_local LstmActivations local;
  LstmActivations& a = acts ? *acts : local;
  a.i.resize(n);
  a.f.resize(n);
  a.g.resize(n);
  a.o.resize(n);
  a.c.resize(n);
  a.tanh_c.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    a.i[j] = sigmoid(pre[j]);
    a.f[j] = sigmoid(pre[n + j]);
    a.g[j] = std::tanh(pre[2 * n + j]);
    a.o[j] = sigmoid(pre[3 * n + j]);
    a.c[j] = a.f[j] * cell[j] + a.i[j] * a.g[j];
    a.tanh_c[j] = std::tanh(a.c[j]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    cell[j] = a.c[j];
    hidden[j] = a.o[j] * a.tanh_c[j];
  }
}

}  // namespace gatenet::nn
