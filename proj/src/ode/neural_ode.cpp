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

#include "gatenet/ode/neural_ode.hpp"

#include <algorithm>
#include <cmath>

#include "gatenet/error.hpp"
#include "gatenet/nn/checkpoint.hpp"
#include "gatenet/sim/integrators.hpp"

namespace gatenet::ode {

NeuralOde::NeuralOde(const nn::NetworkParams& params, model::IonicModel host, double rho_clamp)
    : phi1_(params.phi1),
      gnn_(params.gnn),
      norm_(params.norm),
      host_(std::move(host)),
      obs_indices_(params.partition.observables),
      gate_indices_(params.partition.gnn_gates),
      dt_(params.dt),
      rho_clamp_(rho_clamp) {
  nn::check_compatible(params, host_);
  if (!(dt_ > 0.0)) throw DataError("network time step must be positive");
  if (!(rho_clamp_ > 0.0 && rho_clamp_ < 0.5)) throw UsageError("rho clamp must be in (0, 0.5)");
}

void NeuralOde::heads(std::span<const double> u, std::span<double> h_inf,
                      std::span<double> rho) const {
  if (u.size() != host_.size()) throw UsageError("neural ODE: state dimension mismatch");
  thread_local std::vector<double> x, y;
  x.resize(obs_indices_.size());
  for (std::size_t j = 0; j < obs_indices_.size(); ++j) {
    x[j] = (u[obs_indices_[j]] - norm_.obs_shift[j]) / norm_.obs_scale[j];
  }
  for (const auto& layer : phi1_) {
    y.resize(layer.outputs());
    layer.forward(x, y);
    x.swap(y);
  }
  nn::gnn_h_inf(gnn_, x, h_inf);
  nn::gnn_rho(gnn_, x, rho);
}

void NeuralOde::kinetics(std::span<const double> u, std::span<double> h_inf,
                         std::span<double> tau) const {
  thread_local std::vector<double> rho;
  rho.resize(gate_indices_.size());
  heads(u, h_inf, rho);
  rho_to_tau(rho, dt_, tau, rho_clamp_);
}

void rho_to_tau(std::span<const double> rho, double dt, std::span<double> tau, double eps) {
  if (tau.size() != rho.size()) throw UsageError("rho_to_tau: size mismatch");
  for (std::size_t j = 0; j < rho.size(); ++j) {
    const double r = std::clamp(rho[j], eps, 1.0 - eps);
    tau[j] = -dt / std::log(r);
  }
}

std::vector<double> rho_to_tau(std::span<const double> rho, double dt, double eps) {
  std::vector<double> tau(rho.size());
  rho_to_tau(rho, dt, tau, eps);
  return tau;
}

std::vector<double> neural_gate_derivative(std::span<const double> u, const NeuralOde& node) {
  const auto& gi = node.gate_indices();
  std::vector<double> h_inf(gi.size()), tau(gi.size()), out(gi.size());
  node.kinetics(u, h_inf, tau);
  for (std::size_t j = 0; j < gi.size(); ++j) {
    out[j] = (h_inf[j] - u[gi[j]]) / tau[j];
    if (!std::isfinite(out[j])) {
      throw NumericalError("non-finite neural gate derivative for " +
                           node.host().layout().name(gi[j]));
    }
  }
  return out;
}

void hybrid_step(const NeuralOde& node, const sim::PacingProtocol& protocol, double t, double dt,
                 std::span<double> u) {
  if (!(dt > 0.0)) throw UsageError("hybrid step: dt must be positive");
  const auto& host = node.host();
  const std::size_t k = host.size();
  if (u.size() != k) throw UsageError("hybrid step: state dimension mismatch");
  const auto& gi = node.gate_indices();

  double du[model::kMaxStateSize];
  double h_inf[model::kMaxStateSize], tau[model::kMaxStateSize];
  bool network_gate[model::kMaxStateSize] = {};
  for (std::size_t g : gi) network_gate[g] = true;

  node.kinetics(u, std::span(h_inf, gi.size()), std::span(tau, gi.size()));
  host.derivative(u, protocol.stimulus(t), std::span(du, k), /*include_gates=*/false);

  // Host classic gates outside the network partition, from the frozen V.
  const double v = u[host.layout().voltage_index()];
  double next[model::kMaxStateSize];
  for (const auto& gate : host.gates()) {
    if (network_gate[gate.index]) continue;
    const auto kin = gate.spec.kinetics(v);
    next[gate.index] = model::rush_larsen_update(u[gate.index], kin.steady_state, kin.tau, dt);
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (host.layout().kind(i) == model::VariableKind::kClassicGate) continue;
    next[i] = u[i] + dt * du[i];
  }
  for (std::size_t j = 0; j < gi.size(); ++j) {
    const double h = u[gi[j]];
    next[gi[j]] = h_inf[j] + (h - h_inf[j]) * std::exp(-dt / tau[j]);
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!std::isfinite(next[i])) throw DivergenceError(t, host.layout().name(i));
  }
  std::copy(next, next + k, u.begin());
}

std::vector<double> paced_initial_state(const model::IonicModel& model,
                                        const sim::PacingProtocol& protocol, double min_duration,
                                        double dt_inner) {
  sim::PacingProtocol p = protocol;
  const double beats = std::max(1.0, std::ceil(min_duration / protocol.cycle_length - 1e-9));
  p.total_duration = beats * protocol.cycle_length;
  return sim::paced_state(model, p, dt_inner);
}

sim::Trajectory integrate_neural_ode(const NeuralOde& node, const sim::PacingProtocol& protocol,
                                     double duration, const IntegrationOptions& options,
                                     std::span<const double> initial) {
  const auto& host = node.host();
  if (!(options.dt_inner > 0.0) || !(options.dt_out >= options.dt_inner)) {
    throw UsageError("neural ODE: invalid time steps");
  }
  const double ratio = options.dt_out / options.dt_inner;
  const auto stride = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(stride)) > 1e-9) {
    throw UsageError("dt_out must be an integer multiple of dt_inner");
  }
  if (duration < 0.0) throw UsageError("neural ODE: negative duration");
  sim::Trajectory traj(host.key(), host.layout().names(), options.dt_out, 0.0,
                       protocol.cycle_length);
  if (duration == 0.0) return traj;

  std::vector<double> u;
  if (initial.empty()) {
    u = paced_initial_state(host, protocol, 10000.0, options.dt_inner);
  } else {
    if (initial.size() != host.size()) throw UsageError("neural ODE: initial state dimension");
    u.assign(initial.begin(), initial.end());
  }
  const auto n_out = static_cast<std::size_t>(std::ceil(duration / options.dt_out - 1e-9));
  std::size_t step = 0;
  for (std::size_t s = 0; s < n_out; ++s) {
    traj.push_back(u);
    if (s + 1 == n_out) break;
    for (std::size_t r = 0; r < stride; ++r, ++step) {
      hybrid_step(node, protocol, static_cast<double>(step) * options.dt_inner, options.dt_inner,
                  u);
    }
  }
  return traj;
}

std::size_t CurrentSeries::index_of(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw UsageError("unknown current '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

CurrentSeries reconstruct_currents(const model::IonicModel& model,
                                   const sim::Trajectory& trajectory) {
  CurrentSeries out;
  out.names = model.current_names();
  out.values.assign(out.names.size(), {});
  const std::size_t k = model.size();
  std::vector<std::size_t> cols(k);
  for (std::size_t i = 0; i < k; ++i) cols[i] = trajectory.index_of(model.layout().name(i));
  std::vector<double> u(k), cur(out.names.size());
  for (std::size_t s = 0; s < trajectory.samples(); ++s) {
    for (std::size_t i = 0; i < k; ++i) u[i] = trajectory.at(s, cols[i]);
    model.eval_currents(u, cur);
    out.t.push_back(trajectory.time(s));
    for (std::size_t c = 0; c < cur.size(); ++c) out.values[c].push_back(cur[c]);
  }
  return out;
}

CurrentSeries reconstruct_currents(const NeuralOde& node, const sim::Trajectory& trajectory) {
  return reconstruct_currents(node.host(), trajectory);
}

sim::Trajectory substitute_network_gates(const nn::NetworkParams& params,
                                         const sim::Trajectory& trajectory) {
  const auto& part = params.partition;
  std::vector<std::size_t> obs, gates;
  for (std::size_t i : part.observables) obs.push_back(trajectory.index_of(params.variable_names.at(i)));
  for (std::size_t i : part.gnn_gates) gates.push_back(trajectory.index_of(params.variable_names.at(i)));
  sim::Trajectory out(trajectory.model_key(), trajectory.names(), trajectory.dt(), trajectory.t0(),
                      trajectory.cycle_length());
  if (trajectory.empty()) return out;

  std::vector<double> h(gates.size()), raw(obs.size()), vn(obs.size());
  for (std::size_t j = 0; j < gates.size(); ++j) h[j] = trajectory.at(0, gates[j]);
  std::vector<double> row(trajectory.row(0).begin(), trajectory.row(0).end());
  out.push_back(row);
  for (std::size_t s = 1; s < trajectory.samples(); ++s) {
    for (std::size_t j = 0; j < obs.size(); ++j) raw[j] = trajectory.at(s - 1, obs[j]);
    nn::normalize_observables(params, raw, vn);
    nn::forward_gates(params, vn, h);
    row.assign(trajectory.row(s).begin(), trajectory.row(s).end());
    for (std::size_t j = 0; j < gates.size(); ++j) row[gates[j]] = h[j];
    out.push_back(row);
  }
  return out;
}

void write_currents_csv(const std::filesystem::path& path, const CurrentSeries& currents) {
  std::vector<std::string> header{"t"};
  header.insert(header.end(), currents.names.begin(), currents.names.end());
  std::vector<std::vector<double>> rows(currents.t.size());
  for (std::size_t s = 0; s < currents.t.size(); ++s) {
    rows[s].push_back(currents.t[s]);
    for (const auto& series : currents.values) rows[s].push_back(series[s]);
  }
  sim::write_table_csv(path, header, rows);
}

}  // namespace gatenet::ode
