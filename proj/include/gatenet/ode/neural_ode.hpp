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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gatenet/model/ionic_model.hpp"
#include "gatenet/nn/network.hpp"
#include "gatenet/sim/protocol.hpp"
#include "gatenet/sim/trajectory.hpp"

namespace gatenet::ode {

inline constexpr double kRhoClamp = 1e-6;

// A trained gating network turned into continuous gate kinetics
//   h' = (h_inf(v) - h) / tau(v),  tau = -dt / ln(rho(v)),
// coupled to the host model for every variable the network does not gate.
// Only phi1, the GNN heads and the input normalization are kept; there is
// no recurrent state.
class NeuralOde {
 public:
  // Throws DataError("checkpoint/model mismatch") if the network was not
  // trained for the host's layout.
  NeuralOde(const nn::NetworkParams& params, model::IonicModel host,
            double rho_clamp = kRhoClamp);

  const model::IonicModel& host() const { return host_; }
  const std::vector<std::size_t>& gate_indices() const { return gate_indices_; }
  double dt() const { return dt_; }
  double rho_clamp() const { return rho_clamp_; }

  // h_inf and tau (ms) at the observables of the full state u.
  void kinetics(std::span<const double> u, std::span<double> h_inf, std::span<double> tau) const;
  // Same, exposing rho before the logarithm.
  void heads(std::span<const double> u, std::span<double> h_inf, std::span<double> rho) const;

 private:
  std::vector<nn::DenseLayer> phi1_;
  nn::GnnLayer gnn_;
  nn::Normalization norm_;
  model::IonicModel host_;
  std::vector<std::size_t> obs_indices_;
  std::vector<std::size_t> gate_indices_;
  double dt_;
  double rho_clamp_;
};

// tau = -dt / ln(clamp(rho, eps, 1 - eps)), elementwise.
void rho_to_tau(std::span<const double> rho, double dt, std::span<double> tau,
                double eps = kRhoClamp);
std::vector<double> rho_to_tau(std::span<const double> rho, double dt, double eps = kRhoClamp);

// (h_inf - H(u)) / tau for the network-gated variables. Throws
// NumericalError on non-finite values.
std::vector<double> neural_gate_derivative(std::span<const double> u, const NeuralOde& node);

// One hybrid step from t to t + dt in place: exponential update of the
// network gates with h_inf/tau frozen at the current observables, Rush-Larsen
// for any classic gate the network does not handle, forward Euler for the
// rest. Throws DivergenceError naming the variable.
void hybrid_step(const NeuralOde& node, const sim::PacingProtocol& protocol, double t, double dt,
                 std::span<double> u);

struct IntegrationOptions {
  double dt_inner = 0.02;  // ms
  double dt_out = 1.0;     // ms
};

// Host model state after pacing for whole beats covering at least
// `min_duration` ms, so that t = 0 of a new run is a stimulus onset.
std::vector<double> paced_initial_state(const model::IonicModel& model,
                                        const sim::PacingProtocol& protocol,
                                        double min_duration = 10000.0, double dt_inner = 0.02);

// Integrates the hybrid system over [0, duration) starting from `initial`
// (defaults to the host's paced steady state at the protocol's cycle
// length). Samples at multiples of dt_out; duration 0 gives an empty
// trajectory.
sim::Trajectory integrate_neural_ode(const NeuralOde& node, const sim::PacingProtocol& protocol,
                                     double duration, const IntegrationOptions& options = {},
                                     std::span<const double> initial = {});

// Per-current time series.
struct CurrentSeries {
  std::vector<std::string> names;
  std::vector<double> t;
  std::vector<std::vector<double>> values;  // values[current][sample]

  std::size_t index_of(const std::string& name) const;
};

// Evaluates every host current along the trajectory. The trajectory's gate
// columns are used as they are, so for an integrated neural ODE these are
// the network gates.
CurrentSeries reconstruct_currents(const NeuralOde& node, const sim::Trajectory& trajectory);
CurrentSeries reconstruct_currents(const model::IonicModel& model, const sim::Trajectory& trajectory);

// Copy of a model-generated trajectory whose GNN-handled gate columns are
// replaced by the recurrent network's predictions, driven by the recorded
// observables and started from the recorded gates of the first sample.
sim::Trajectory substitute_network_gates(const nn::NetworkParams& params,
                                         const sim::Trajectory& trajectory);

// CSV `t,<current names>`.
void write_currents_csv(const std::filesystem::path& path, const CurrentSeries& currents);

}  // namespace gatenet::ode
