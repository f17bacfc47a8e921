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

#include "gatenet/nn/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gatenet/error.hpp"
#include "gatenet/simd/kernels.hpp"

namespace gatenet::nn {

namespace {

template <typename Ref, typename Self>
std::vector<Ref> collect(Self& p) {
  std::vector<Ref> out;
  for (std::size_t l = 0; l < p.phi1.size(); ++l) {
    const std::string base = "phi1." + std::to_string(l);
    out.push_back({base + ".weight", "phi1", true, &p.phi1[l].weight});
    out.push_back({base + ".bias", "phi1", false, &p.phi1[l].bias});
  }
  out.push_back({"gnn.w_inf", "gnn", true, &p.gnn.w_inf});
  out.push_back({"gnn.b_inf", "gnn", false, &p.gnn.b_inf});
  out.push_back({"gnn.w_tau", "gnn", true, &p.gnn.w_tau});
  out.push_back({"gnn.b_tau", "gnn", false, &p.gnn.b_tau});
  out.push_back({"phi2.weight", "phi2", true, &p.phi2.weight});
  out.push_back({"phi2.bias", "phi2", false, &p.phi2.bias});
  out.push_back({"lstm.w_x", "lstm", true, &p.lstm.w_x});
  out.push_back({"lstm.w_h", "lstm", true, &p.lstm.w_h});
  out.push_back({"lstm.bias", "lstm", false, &p.lstm.bias});
  out.push_back({"phi3.weight", "phi3", true, &p.phi3.weight});
  out.push_back({"phi3.bias", "phi3", false, &p.phi3.bias});
  return out;
}

void check_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw UsageError(std::string(what) + ": expected dimension " + std::to_string(want) +
                     ", got " + std::to_string(got));
  }
}

}  // namespace

std::vector<ParamRef> NetworkParams::tensors() { return collect<ParamRef>(*this); }

std::vector<ConstParamRef> NetworkParams::tensors() const {
  return collect<ConstParamRef>(*this);
}

NetworkParams NetworkParams::zeros_like() const {
  NetworkParams z = *this;
  for (auto& t : z.tensors()) t.tensor->fill(0.0);
  return z;
}

const std::vector<std::string>& component_names() {
  static const std::vector<std::string> names = {"phi1", "gnn", "phi2", "lstm", "phi3", "norm"};
  return names;
}

void NetworkState::reset(const NetworkShape& shape, std::span<const double> initial_gates) {
  gnn_h.assign(shape.gates, 0.0);
  if (!initial_gates.empty()) {
    check_dim(initial_gates.size(), shape.gates, "initial gate state");
    std::copy(initial_gates.begin(), initial_gates.end(), gnn_h.begin());
  }
  lstm_hidden.assign(shape.lstm_width, 0.0);
  lstm_cell.assign(shape.lstm_width, 0.0);
}

NetworkParams init_network(const NetworkShape& shape, std::uint64_t seed) {
  if (shape.phi1_layers == 0) throw UsageError("phi1 needs at least one layer");
  NetworkParams p;
  p.shape = shape;
  Rng rng(seed);
  const std::size_t w = shape.width;
  for (std::size_t l = 0; l < shape.phi1_layers; ++l) {
    const std::size_t in = l == 0 ? shape.observables : w;
    DenseLayer layer(in, w, Activation::kTanh);
    glorot_uniform(layer.weight, in, w, rng);
    p.phi1.push_back(std::move(layer));
  }
  p.gnn = GnnLayer(w, shape.gates);
  glorot_uniform(p.gnn.w_inf, w, shape.gates, rng);
  glorot_uniform(p.gnn.w_tau, w, shape.gates, rng);
  p.gnn.b_tau.fill(2.0);

  const std::size_t z_in = shape.observables + shape.gates;
  p.phi2 = DenseLayer(z_in, w, Activation::kTanh);
  glorot_uniform(p.phi2.weight, z_in, w, rng);

  const std::size_t hdim = shape.lstm_width;
  p.lstm = LstmLayer(w, hdim);
  glorot_uniform(p.lstm.w_x, w, hdim, rng);
  glorot_uniform(p.lstm.w_h, hdim, hdim, rng);
  for (std::size_t j = 0; j < hdim; ++j) p.lstm.bias.data[hdim + j] = 1.0;

  p.phi3 = DenseLayer(hdim, shape.others, Activation::kIdentity);
  glorot_uniform(p.phi3.weight, hdim, shape.others, rng);

  p.norm.obs_shift.assign(shape.observables, 0.0);
  p.norm.obs_scale.assign(shape.observables, 1.0);
  p.norm.other_shift.assign(shape.others, 0.0);
  p.norm.other_scale.assign(shape.others, 1.0);
  p.provenance.seed = seed;
  return p;
}

NetworkParams init_network(const model::IonicModel& model, std::uint64_t seed,
                           std::size_t width, std::size_t lstm_width) {
  const auto& part = model.partition();
  NetworkShape shape;
  shape.observables = part.observables.size();
  shape.gates = part.gnn_gates.size();
  shape.others = part.lstm_vars.size();
  shape.width = width;
  shape.lstm_width = lstm_width;
  NetworkParams p = init_network(shape, seed);
  p.model_key = model.key();
  p.variable_names = model.layout().names();
  p.partition = part;
  return p;
}

Normalization compute_normalization(const model::IonicModel& model,
                                    std::span<const sim::Trajectory* const> segments) {
  const auto& part = model.partition();
  const auto& layout = model.layout();
  auto scan = [&](const std::vector<std::size_t>& vars, std::vector<double>& shift,
                  std::vector<double>& scale) {
    shift.assign(vars.size(), 0.0);
    scale.assign(vars.size(), 1.0);
    for (std::size_t j = 0; j < vars.size(); ++j) {
      const auto kind = layout.kind(vars[j]);
      if (kind == model::VariableKind::kClassicGate || kind == model::VariableKind::kAtypicalGate) {
        continue;
      }
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto* seg : segments) {
        const std::size_t col = seg->index_of(layout.name(vars[j]));
        for (std::size_t i = 0; i < seg->samples(); ++i) {
          lo = std::min(lo, seg->at(i, col));
          hi = std::max(hi, seg->at(i, col));
        }
      }
      if (!std::isfinite(lo)) continue;
      shift[j] = lo;
      scale[j] = hi - lo > 1e-12 ? hi - lo : 1.0;
    }
  };
  Normalization n;
  scan(part.observables, n.obs_shift, n.obs_scale);
  scan(part.lstm_vars, n.other_shift, n.other_scale);
  return n;
}

void normalize_observables(const NetworkParams& params, std::span<const double> v,
                           std::span<double> out) {
  check_dim(v.size(), params.shape.observables, "observable vector");
  for (std::size_t j = 0; j < v.size(); ++j) {
    out[j] = (v[j] - params.norm.obs_shift[j]) / params.norm.obs_scale[j];
  }
}

void normalize_others(const NetworkParams& params, std::span<const double> h_tilde,
                      std::span<double> out) {
  check_dim(h_tilde.size(), params.shape.others, "LSTM-branch vector");
  for (std::size_t j = 0; j < h_tilde.size(); ++j) {
    out[j] = (h_tilde[j] - params.norm.other_shift[j]) / params.norm.other_scale[j];
  }
}

void denormalize_others(const NetworkParams& params, std::span<const double> norm,
                        std::span<double> out) {
  for (std::size_t j = 0; j < norm.size(); ++j) {
    out[j] = norm[j] * params.norm.other_scale[j] + params.norm.other_shift[j];
  }
}

namespace {

// phi1 + GNN. Returns x in `x_out` (last phi1 activation) and updates h.
void gate_branch(const NetworkParams& params, std::span<const double> v_norm,
                 std::span<double> h, StepCache* cache) {
  const std::size_t n_l = params.phi1.size();
  thread_local std::vector<std::vector<double>> acts;
  std::vector<std::vector<double>>& a = cache ? cache->phi1 : acts;
  a.resize(n_l);
  std::span<const double> in = v_norm;
  for (std::size_t l = 0; l < n_l; ++l) {
    a[l].resize(params.phi1[l].outputs());
    params.phi1[l].forward(in, a[l]);
    in = a[l];
  }
  const std::size_t ng = params.gnn.gates();
  thread_local std::vector<double> h_inf_local, rho_local;
  std::vector<double>& h_inf = cache ? cache->h_inf : h_inf_local;
  std::vector<double>& rho = cache ? cache->rho : rho_local;
  h_inf.resize(ng);
  rho.resize(ng);
  gnn_h_inf(params.gnn, in, h_inf);
  gnn_rho(params.gnn, in, rho);
  if (cache) cache->h_prev.assign(h.begin(), h.end());
  gnn_update(h, rho, h_inf);
}

}  // namespace

void forward_gates(const NetworkParams& params, std::span<const double> v_norm,
                   std::span<double> gnn_h) {
  check_dim(gnn_h.size(), params.shape.gates, "gate state");
  gate_branch(params, v_norm, gnn_h, nullptr);
}

void forward_step(const NetworkParams& params, std::span<const double> v_norm,
                  NetworkState& state, std::span<double> gates_out,
                  std::span<double> others_out, StepCache* cache) {
  const auto& s = params.shape;
  check_dim(v_norm.size(), s.observables, "observable vector");
  check_dim(state.gnn_h.size(), s.gates, "gate state");
  check_dim(state.lstm_hidden.size(), s.lstm_width, "lstm state");
  if (cache) cache->v.assign(v_norm.begin(), v_norm.end());

  gate_branch(params, v_norm, state.gnn_h, cache);
  if (cache) cache->h = state.gnn_h;
  std::copy(state.gnn_h.begin(), state.gnn_h.end(), gates_out.begin());

  thread_local std::vector<double> z_in_local, z_local;
  std::vector<double>& z_in = cache ? cache->z_in : z_in_local;
  std::vector<double>& z = cache ? cache->z : z_local;
  z_in.resize(s.observables + s.gates);
  std::copy(v_norm.begin(), v_norm.end(), z_in.begin());
  std::copy(state.gnn_h.begin(), state.gnn_h.end(), z_in.begin() + s.observables);
  z.resize(params.phi2.outputs());
  params.phi2.forward(z_in, z);

  if (cache) {
    cache->lstm_h_prev = state.lstm_hidden;
    cache->lstm_c_prev = state.lstm_cell;
  }
  lstm_step(params.lstm, z, state.lstm_hidden, state.lstm_cell, cache ? &cache->lstm : nullptr);
  if (cache) cache->lstm_h = state.lstm_hidden;

  params.phi3.forward(state.lstm_hidden, others_out);
  if (cache) cache->others.assign(others_out.begin(), others_out.end());
}

StepOutput network_step(std::span<const double> v, const NetworkParams& params,
                        NetworkState& state) {
  const auto& s = params.shape;
  std::vector<double> vn(s.observables);
  normalize_observables(params, v, vn);
  StepOutput out;
  out.gates.resize(s.gates);
  std::vector<double> others_norm(s.others);
  forward_step(params, vn, state, out.gates, others_norm);
  out.others.resize(s.others);
  denormalize_others(params, others_norm, out.others);
  return out;
}

std::vector<std::vector<double>> rollout(std::span<const double> v0, std::size_t n_steps,
                                         const NetworkParams& params, NetworkState& state) {
  const auto slots = params.observable_slots();
  std::vector<std::vector<double>> out;
  out.reserve(n_steps);
  std::vector<double> v(v0.begin(), v0.end());
  for (std::size_t i = 0; i < n_steps; ++i) {
    StepOutput step = network_step(v, params, state);
    for (std::size_t j = 0; j < slots.size(); ++j) v[j] = step.others[slots[j]];
    for (double x : v) {
      if (!std::isfinite(x)) throw NumericalError("rollout diverged at step " + std::to_string(i));
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace gatenet::nn
