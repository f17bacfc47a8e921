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
#include <vector>

#include "gatenet/model/ionic_model.hpp"
#include "gatenet/sim/protocol.hpp"
#include "gatenet/sim/trajectory.hpp"

namespace gatenet::sim {

// One Rush-Larsen step from t to t + dt, in place: classic gates use the
// exact exponential update with inf/tau frozen at the current V, all other
// variables take a forward Euler step. The stimulus is evaluated at t.
// Throws DivergenceError naming the first non-finite variable.
void rush_larsen_step(const model::IonicModel& model, const PacingProtocol& protocol,
                      double t, double dt, std::span<double> state);

std::vector<double> rush_larsen_step(const model::IonicModel& model,
                                     const PacingProtocol& protocol, double t, double dt,
                                     std::span<const double> state);

// One classic fourth-order Runge-Kutta step.
void rk4_step(const model::IonicModel& model, const PacingProtocol& protocol, double t,
              double dt, std::span<double> state);

struct SimulationOptions {
  double dt_inner = 0.02;   // ms
  double dt_out = 1.0;      // ms; must be an integer multiple of dt_inner
  double record_from = 0.0; // ms; samples before this time are discarded
};

// Integrates from `initial` (or the model's initial state when empty) over
// [0, protocol.total_duration) with Rush-Larsen steps and records every
// (dt_out / dt_inner)-th state exactly, without interpolation.
Trajectory simulate(const model::IonicModel& model, const PacingProtocol& protocol,
                    const SimulationOptions& options, std::span<const double> initial = {});

// RK4 at a fixed inner step of at most 0.005 ms, sampled at dt_out.
Trajectory reference_solve(const model::IonicModel& model, const PacingProtocol& protocol,
                           double dt_out, std::span<const double> initial = {});

// State after integrating for protocol.total_duration (used to obtain paced
// steady states).
std::vector<double> paced_state(const model::IonicModel& model, const PacingProtocol& protocol,
                                double dt_inner = 0.02, std::span<const double> initial = {});

}  // namespace gatenet::sim
