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

#include "gatenet/train/loss.hpp"

#include <cmath>

#include "gatenet/error.hpp"

namespace gatenet::train {

namespace {

void same_size(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw UsageError("loss: prediction/target size mismatch");
}

}  // namespace

double mean_square_error(std::span<const double> pred, std::span<const double> target) {
  same_size(pred, target);
  if (pred.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    s += d * d;
  }
  return s / static_cast<double>(pred.size());
}

double mean_abs_error(std::span<const double> pred, std::span<const double> target) {
  same_size(pred, target);
  if (pred.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - target[i]);
  return s / static_cast<double>(pred.size());
}

double regularization(const nn::NetworkParams& params, const std::set<std::string>& freeze) {
  double s = 0.0;
  std::size_t n = 0;
  for (const auto& ref : params.tensors()) {
    if (!ref.weight_matrix || freeze.count(ref.component)) continue;
    for (double w : ref.tensor->data) s += w * w;
    n += ref.tensor->size();
  }
  return n ? s / static_cast<double>(n) : 0.0;
}

LossTerms first_pass_loss(std::span<const double> pred_gates, std::span<const double> true_gates,
                          std::span<const double> pred_others, std::span<const double> true_others,
                          const nn::NetworkParams& params, double lambda,
                          const std::set<std::string>& freeze) {
  LossTerms t;
  t.term1 = mean_square_error(pred_gates, true_gates);
  t.term2 = mean_square_error(pred_others, true_others);
  t.reg = regularization(params, freeze);
  t.total = t.term1 + t.term2 + lambda * t.reg;
  return t;
}

LossTerms second_pass_loss(std::span<const double> pred_obs, std::span<const double> true_obs,
                           std::span<const double> gates, std::span<const double> reference_gates,
                           const nn::NetworkParams& params, double lambda, double eta,
                           const std::set<std::string>& freeze) {
  LossTerms t;
  t.term1 = mean_square_error(pred_obs, true_obs);
  t.term2 = mean_abs_error(gates, reference_gates);
  t.reg = regularization(params, freeze);
  t.total = t.term1 + eta * t.term2 + lambda * t.reg;
  return t;
}

}  // namespace gatenet::train
