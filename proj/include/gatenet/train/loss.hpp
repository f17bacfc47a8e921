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
#include <vector>

#include "gatenet/nn/network.hpp"

namespace gatenet::train {

enum class LossKind { kFirstPass, kSecondPass };

// Loss terms. For the first pass term1/term2 are the N_1 and N_2 squared
// errors; for the second pass they are the observable data error and the
// (unweighted) gate drift. total = term1 + w * term2 + lambda * reg with
// w = 1 (first pass) or eta (second pass).
struct LossTerms {
  double term1 = 0.0;
  double term2 = 0.0;
  double reg = 0.0;
  double total = 0.0;
};

struct EpochRecord {
  int epoch = 0;
  LossTerms train;
  double val_total = 0.0;
};

struct LossReport {
  LossKind kind = LossKind::kFirstPass;
  LossTerms final;
  std::vector<EpochRecord> history;  // history[0] is the untrained network
};

double mean_square_error(std::span<const double> pred, std::span<const double> target);
double mean_abs_error(std::span<const double> pred, std::span<const double> target);

// Mean of squared entries over all weight matrices that are not frozen.
// Biases, recurrent states and normalization constants are excluded.
double regularization(const nn::NetworkParams& params, const std::set<std::string>& freeze = {});

LossTerms first_pass_loss(std::span<const double> pred_gates, std::span<const double> true_gates,
                          std::span<const double> pred_others, std::span<const double> true_others,
                          const nn::NetworkParams& params, double lambda,
                          const std::set<std::string>& freeze = {});

LossTerms second_pass_loss(std::span<const double> pred_obs, std::span<const double> true_obs,
                           std::span<const double> gates, std::span<const double> reference_gates,
                           const nn::NetworkParams& params, double lambda, double eta,
                           const std::set<std::string>& freeze = {});

}  // namespace gatenet::train
