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

#include <cmath>

#include "gatenet/model/models.hpp"

namespace gatenet::model {

namespace {

constexpr double kGNa = 120.0;  // mS/cm^2
constexpr double kGK = 36.0;
constexpr double kGL = 0.3;
constexpr double kENa = 50.0;  // mV
constexpr double kEK = -77.0;
constexpr double kEL = -54.387;

// x / (1 - exp(-x / s)) with the removable singularity at x = 0.
double linoid(double x, double s) {
  const double r = x / s;
  if (std::abs(r) < 1e-7) return s * (1.0 + 0.5 * r);
  return x / -std::expm1(-r);
}

enum : std::size_t { kV, kM, kH, kN };

}  // namespace

IonicModel hh1952() {
  IonicModel::Definition def;
  def.key = "hh1952";
  def.layout = StateLayout({"V", "m", "h", "n"},
                           {VariableKind::kVoltage, VariableKind::kClassicGate,
                            VariableKind::kClassicGate, VariableKind::kClassicGate});
  def.partition.observables = {kV};
  def.partition.gnn_gates = {kM, kH, kN};
  def.partition.lstm_vars = {kV};

  def.gates.push_back({kM, GateSpec::from_rates(
                               [](double v) { return 0.1 * linoid(v + 40.0, 10.0); },
                               [](double v) { return 4.0 * std::exp(-(v + 65.0) / 18.0); })});
  def.gates.push_back({kH, GateSpec::from_rates(
                               [](double v) { return 0.07 * std::exp(-(v + 65.0) / 20.0); },
                               [](double v) { return 1.0 / (1.0 + std::exp(-(v + 35.0) / 10.0)); })});
  def.gates.push_back({kN, GateSpec::from_rates(
                               [](double v) { return 0.01 * linoid(v + 55.0, 10.0); },
                               [](double v) { return 0.125 * std::exp(-(v + 65.0) / 80.0); })});

  def.currents.push_back({"I_Na", 1.0, true, [](std::span<const double> u) {
                            return kGNa * u[kM] * u[kM] * u[kM] * u[kH] * (u[kV] - kENa);
                          }});
  def.currents.push_back({"I_K", 1.0, true, [](std::span<const double> u) {
                            const double n2 = u[kN] * u[kN];
                            return kGK * n2 * n2 * (u[kV] - kEK);
                          }});
  def.currents.push_back({"I_L", 1.0, true, [](std::span<const double> u) {
                            return kGL * (u[kV] - kEL);
                          }});
  def.capacitance = 1.0;  // uF/cm^2
  def.voltage_sign = -1.0;

  // Resting state: gates at their steady state for V = -65 mV.
  std::vector<double> rest = {-65.0, 0.0, 0.0, 0.0};
  for (const auto& g : def.gates) rest[g.index] = g.spec.steady_state(-65.0);
  def.initial_state = rest;
  return IonicModel(std::move(def));
}

}  // namespace gatenet::model
