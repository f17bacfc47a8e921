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

#include "gatenet/sim/integrators.hpp"

#include <array>
#include <cmath>

#include "gatenet/error.hpp"

namespace gatenet::sim {

namespace {

using model::kMaxStateSize;

void check_finite(const model::IonicModel& model, double t, std::span<const double> state) {
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (!std::isfinite(state[i])) throw DivergenceError(t, model.layout().name(i));
  }
}

std::size_t steps_per_sample(double dt_inner, double dt_out) {
  if (!(dt_inner > 0.0) || !(dt_out > 0.0)) throw UsageError("time steps must be positive");
  const double ratio = dt_out / dt_inner;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw UsageError("dt_out must be an integer multiple of the inner step");
  }
  return static_cast<std::size_t>(rounded);
}

std::vector<double> start_state(const model::IonicModel& model, std::span<const double> initial) {
  if (initial.empty()) return model.initial_state();
  if (initial.size() != model.size()) throw UsageError("initial state has wrong dimension");
  return {initial.begin(), initial.end()};
}

template <typename Step>
Trajectory integrate(const model::IonicModel& model, const PacingProtocol& protocol,
                     double dt_inner, double dt_out, double record_from,
                     std::span<const double> initial, Step step) {
  protocol.validate();
  const std::size_t ratio = steps_per_sample(dt_inner, dt_out);
  const auto n_samples = static_cast<std::size_t>(std::llround(protocol.total_duration / dt_out));
  const auto first = static_cast<std::size_t>(std::llround(record_from / dt_out));
  std::vector<double> u = start_state(model, initial);
  Trajectory traj(model.key(), model.layout().names(), dt_out,
                  static_cast<double>(first) * dt_out, protocol.cycle_length);
  if (first < n_samples) traj.reserve(n_samples - first);
  std::size_t step_index = 0;
  for (std::size_t n = 0; n < n_samples; ++n) {
    if (n >= first) traj.push_back(u);
    for (std::size_t s = 0; s < ratio; ++s, ++step_index) {
      step(static_cast<double>(step_index) * dt_inner, std::span<double>(u));
    }
  }
  return traj;
}

}  // namespace

void rush_larsen_step(const model::IonicModel& model, const PacingProtocol& protocol,
                      double t, double dt, std::span<double> state) {
  if (!(dt > 0.0)) throw UsageError("rush_larsen_step requires dt > 0");
  std::array<double, kMaxStateSize> du{};
  const std::size_t k = state.size();
  model.derivative(state, protocol.stimulus(t), std::span<double>(du.data(), k), false);
  const double v = state[model.layout().voltage_index()];
  if (!std::isfinite(v)) throw DivergenceError(t, model.layout().name(model.layout().voltage_index()));
  for (std::size_t i = 0; i < k; ++i) {
    if (model.layout().kind(i) != model::VariableKind::kClassicGate) state[i] += dt * du[i];
  }
  for (const auto& g : model.gates()) {
    const auto kin = g.spec.kinetics(v);
    state[g.index] = model::rush_larsen_update(state[g.index], kin.steady_state, kin.tau, dt);
  }
  check_finite(model, t + dt, state);
}

std::vector<double> rush_larsen_step(const model::IonicModel& model,
                                     const PacingProtocol& protocol, double t, double dt,
                                     std::span<const double> state) {
  std::vector<double> u(state.begin(), state.end());
  rush_larsen_step(model, protocol, t, dt, std::span<double>(u));
  return u;
}

void rk4_step(const model::IonicModel& model, const PacingProtocol& protocol, double t,
              double dt, std::span<double> state) {
  const std::size_t k = state.size();
  std::array<double, kMaxStateSize> k1{}, k2{}, k3{}, k4{}, tmp{};
  auto f = [&](double time, const std::array<double, kMaxStateSize>& u,
               std::array<double, kMaxStateSize>& out) {
    model.derivative(std::span<const double>(u.data(), k), protocol.stimulus(time),
                     std::span<double>(out.data(), k));
  };
  std::array<double, kMaxStateSize> u0{};
  for (std::size_t i = 0; i < k; ++i) u0[i] = state[i];
  f(t, u0, k1);
  for (std::size_t i = 0; i < k; ++i) tmp[i] = u0[i] + 0.5 * dt * k1[i];
  f(t + 0.5 * dt, tmp, k2);
  for (std::size_t i = 0; i < k; ++i) tmp[i] = u0[i] + 0.5 * dt * k2[i];
  f(t + 0.5 * dt, tmp, k3);
  for (std::size_t i = 0; i < k; ++i) tmp[i] = u0[i] + dt * k3[i];
  f(t + dt, tmp, k4);
  for (std::size_t i = 0; i < k; ++i) {
    state[i] = u0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  check_finite(model, t + dt, state);
}

Trajectory simulate(const model::IonicModel& model, const PacingProtocol& protocol,
                    const SimulationOptions& options, std::span<const double> initial) {
  return integrate(model, protocol, options.dt_inner, options.dt_out, options.record_from,
                   initial, [&](double t, std::span<double> u) {
                     rush_larsen_step(model, protocol, t, options.dt_inner, u);
                   });
}

Trajectory reference_solve(const model::IonicModel& model, const PacingProtocol& protocol,
                           double dt_out, std::span<const double> initial) {
  constexpr double kMaxInner = 0.005;
  const double n = std::ceil(dt_out / kMaxInner - 1e-9);
  const double inner = dt_out / n;
  return integrate(model, protocol, inner, dt_out, 0.0, initial,
                   [&](double t, std::span<double> u) { rk4_step(model, protocol, t, inner, u); });
}

std::vector<double> paced_state(const model::IonicModel& model, const PacingProtocol& protocol,
                                double dt_inner, std::span<const double> initial) {
  protocol.validate();
  std::vector<double> u = start_state(model, initial);
  const auto n = static_cast<std::size_t>(std::llround(protocol.total_duration / dt_inner));
  for (std::size_t s = 0; s < n; ++s) {
    rush_larsen_step(model, protocol, static_cast<double>(s) * dt_inner, dt_inner,
                     std::span<double>(u));
  }
  return u;
}

}  // namespace gatenet::sim
