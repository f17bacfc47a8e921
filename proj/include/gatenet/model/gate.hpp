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

namespace gatenet::model {

// Voltage-dependent kinetics of a Hodgkin-Huxley gating variable. A gate is
// described either by its opening/closing rates (alpha, beta) or by its
// steady state and time constant; the other pair is derived:
//   inf = alpha / (alpha + beta),  tau = 1 / (alpha + beta).
class GateSpec {
 public:
  using Fn = std::function<double(double)>;

  struct Kinetics {
    double steady_state;
    double tau;  // ms
  };

  static GateSpec from_rates(Fn alpha, Fn beta);
  static GateSpec from_steady_state(Fn steady_state, Fn tau);

  double alpha(double v) const;  // 1/ms
  double beta(double v) const;   // 1/ms
  double steady_state(double v) const;
  double tau(double v) const;    // ms
  Kinetics kinetics(double v) const;

  bool rate_form() const { return rate_form_; }

 private:
  GateSpec(bool rate_form, Fn first, Fn second);

  bool rate_form_;
  Fn first_;
  Fn second_;
};

// (inf(v) - m) / tau(v). Throws DataError("invalid membrane potential") when
// v is not finite.
double gate_derivative(double m, double v, const GateSpec& spec);

// alpha(v) (1 - m) - beta(v) m, the rate form of the same derivative.
double gate_derivative_rates(double m, double v, const GateSpec& spec);

// Exact solution of m' = (inf - m) / tau over dt with frozen coefficients.
double rush_larsen_update(double m, double steady_state, double tau, double dt);

}  // namespace gatenet::model
