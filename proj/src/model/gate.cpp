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

#include "gatenet/model/gate.hpp"

#include <cmath>
#include <utility>

#include "gatenet/error.hpp"

namespace gatenet::model {

GateSpec::GateSpec(bool rate_form, Fn first, Fn second)
    : rate_form_(rate_form), first_(std::move(first)), second_(std::move(second)) {}

GateSpec GateSpec::from_rates(Fn alpha, Fn beta) {
  return GateSpec(true, std::move(alpha), std::move(beta));
}

GateSpec GateSpec::from_steady_state(Fn steady_state, Fn tau) {
  return GateSpec(false, std::move(steady_state), std::move(tau));
}

double GateSpec::alpha(double v) const {
  if (rate_form_) return first_(v);
  return first_(v) / second_(v);
}

double GateSpec::beta(double v) const {
  if (rate_form_) return second_(v);
  return (1.0 - first_(v)) / second_(v);
}

double GateSpec::steady_state(double v) const { return kinetics(v).steady_state; }

double GateSpec::tau(double v) const { return kinetics(v).tau; }

GateSpec::Kinetics GateSpec::kinetics(double v) const {
  if (rate_form_) {
    const double a = first_(v);
    const double b = second_(v);
    const double sum = a + b;
    return {a / sum, 1.0 / sum};
  }
  return {first_(v), second_(v)};
}

double gate_derivative(double m, double v, const GateSpec& spec) {
  if (!std::isfinite(v)) throw DataError("invalid membrane potential");
  const auto k = spec.kinetics(v);
  return (k.steady_state - m) / k.tau;
}

double gate_derivative_rates(double m, double v, const GateSpec& spec) {
  if (!std::isfinite(v)) throw DataError("invalid membrane potential");
  return spec.alpha(v) * (1.0 - m) - spec.beta(v) * m;
}

double rush_larsen_update(double m, double steady_state, double tau, double dt) {
  return steady_state + (m - steady_state) * std::exp(-dt / tau);
}

}  // namespace gatenet::model
