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

#include "gatenet/train/bptt.hpp"

#include <cmath>
#include <vector>

#include "gatenet/error.hpp"
#include "gatenet/simd/kernels.hpp"

namespace gatenet::train {

WindowSums& WindowSums::operator+=(const WindowSums& o) {
  gate += o.gate;
  other += o.other;
  gate_count += o.gate_count;
  other_count += o.other_count;
  return *this;
}

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

struct Scratch {
  std::vector<nn::StepCache> caches;
  std::vector<double> d_gates, d_others;  // per step loss derivatives
  std::vector<double> gates, others;
  std::vector<double> dh, dh_prev, dlh, dlc, dlh_prev, dlc_prev;
  std::vector<double> da, dz, dpre2, dz_in, d_inf, d_tau, dx, dpre, dprev;
};

void backward(const nn::NetworkParams& p, Scratch& s, std::size_t steps,
              const std::set<std::string>& freeze, nn::NetworkParams& g) {
  const auto& k = simd::kernels();
  const auto& sh = p.shape;
  const std::size_t ng = sh.gates, no = sh.others, nu = sh.observables, hd = sh.lstm_width;
  const std::size_t w2 = p.phi2.outputs();
  const bool f_phi1 = freeze.count("phi1"), f_gnn = freeze.count("gnn"),
             f_phi2 = freeze.count("phi2"), f_lstm = freeze.count("lstm"),
             f_phi3 = freeze.count("phi3");

  s.dh.assign(ng, 0.0);    // d/d h(t) coming from later steps
  s.dlh.assign(hd, 0.0);   // d/d lstm hidden
  s.dlc.assign(hd, 0.0);   // d/d lstm cell
  s.dh_prev.resize(ng);
  s.dlh_prev.resize(hd);
  s.dlc_prev.resize(hd);
  s.da.resize(4 * hd);
  s.dz.resize(w2);
  s.dpre2.resize(w2);
  s.dz_in.resize(nu + ng);
  s.d_inf.resize(ng);
  s.d_tau.resize(ng);

  for (std::size_t t = steps; t-- > 0;) {
    const nn::StepCache& c = s.caches[t];
    const double* d_out = s.d_others.data() + t * no;

    // phi3 (identity output).
    if (!f_phi3) {
      k.ger_acc(g.phi3.weight.data.data(), no, hd, d_out, c.lstm_h.data());
      k.axpy(1.0, d_out, g.phi3.bias.data.data(), no);
    }
    k.gemv_t_acc(p.phi3.weight.data.data(), no, hd, d_out, s.dlh.data());

    // LSTM: h = o tanh(c), c = f c_prev + i g.
    const auto& a = c.lstm;
    for (std::size_t j = 0; j < hd; ++j) {
      const double dh = s.dlh[j];
      const double dc = s.dlc[j] + dh * a.o[j] * (1.0 - a.tanh_c[j] * a.tanh_c[j]);
      s.da[j] = dc * a.g[j] * a.i[j] * (1.0 - a.i[j]);
      s.da[hd + j] = dc * c.lstm_c_prev[j] * a.f[j] * (1.0 - a.f[j]);
      s.da[2 * hd + j] = dc * a.i[j] * (1.0 - a.g[j] * a.g[j]);
      s.da[3 * hd + j] = dh * a.tanh_c[j] * a.o[j] * (1.0 - a.o[j]);
      s.dlc_prev[j] = dc * a.f[j];
    }
    if (!f_lstm) {
      k.ger_acc(g.lstm.w_x.data.data(), 4 * hd, w2, s.da.data(), c.z.data());
      k.ger_acc(g.lstm.w_h.data.data(), 4 * hd, hd, s.da.data(), c.lstm_h_prev.data());
      k.axpy(1.0, s.da.data(), g.lstm.bias.data.data(), 4 * hd);
    }
    std::fill(s.dz.begin(), s.dz.end(), 0.0);
    k.gemv_t_acc(p.lstm.w_x.data.data(), 4 * hd, w2, s.da.data(), s.dz.data());
    std::fill(s.dlh_prev.begin(), s.dlh_prev.end(), 0.0);
    k.gemv_t_acc(p.lstm.w_h.data.data(), 4 * hd, hd, s.da.data(), s.dlh_prev.data());

    // phi2.
    for (std::size_t j = 0; j < w2; ++j) {
      s.dpre2[j] = s.dz[j] * nn::activation_grad(p.phi2.activation, c.z[j]);
    }
    if (!f_phi2) {
      k.ger_acc(g.phi2.weight.data.data(), w2, nu + ng, s.dpre2.data(), c.z_in.data());
      k.axpy(1.0, s.dpre2.data(), g.phi2.bias.data.data(), w2);
    }
    std::fill(s.dz_in.begin(), s.dz_in.end(), 0.0);
    k.gemv_t_acc(p.phi2.weight.data.data(), w2, nu + ng, s.dpre2.data(), s.dz_in.data());

    // GNN: h = rho h_prev + (1 - rho) h_inf.
    const double* d_gate_loss = s.d_gates.data() + t * ng;
    for (std::size_t j = 0; j < ng; ++j) {
      const double dh = s.dh[j] + s.dz_in[nu + j] + d_gate_loss[j];
      const double rho = c.rho[j], hinf = c.h_inf[j];
      s.dh_prev[j] = dh * rho;
      s.d_tau[j] = dh * (c.h_prev[j] - hinf) * rho * (1.0 - rho);
      s.d_inf[j] = dh * (1.0 - rho) * hinf * (1.0 - hinf);
    }
    const std::vector<double>& x = c.phi1.back();
    const std::size_t nx = x.size();
    if (!f_gnn) {
      k.ger_acc(g.gnn.w_inf.data.data(), ng, nx, s.d_inf.data(), x.data());
      k.axpy(1.0, s.d_inf.data(), g.gnn.b_inf.data.data(), ng);
      k.ger_acc(g.gnn.w_tau.data.data(), ng, nx, s.d_tau.data(), x.data());
      k.axpy(1.0, s.d_tau.data(), g.gnn.b_tau.data.data(), ng);
    }

    // phi1 layers, last to first.
    if (!f_phi1) {
      s.dx.assign(nx, 0.0);
      k.gemv_t_acc(p.gnn.w_inf.data.data(), ng, nx, s.d_inf.data(), s.dx.data());
      k.gemv_t_acc(p.gnn.w_tau.data.data(), ng, nx, s.d_tau.data(), s.dx.data());
      for (std::size_t l = p.phi1.size(); l-- > 0;) {
        const auto& layer = p.phi1[l];
        const std::vector<double>& out = c.phi1[l];
        const std::vector<double>& in = l == 0 ? c.v : c.phi1[l - 1];
        s.dpre.resize(out.size());
        for (std::size_t j = 0; j < out.size(); ++j) {
          s.dpre[j] = s.dx[j] * nn::activation_grad(layer.activation, out[j]);
        }
        k.ger_acc(g.phi1[l].weight.data.data(), out.size(), in.size(), s.dpre.data(), in.data());
        k.axpy(1.0, s.dpre.data(), g.phi1[l].bias.data.data(), out.size());
        if (l > 0) {
          s.dprev.assign(in.size(), 0.0);
          k.gemv_t_acc(layer.weight.data.data(), out.size(), in.size(), s.dpre.data(),
                       s.dprev.data());
          s.dx.swap(s.dprev);
        }
      }
    }

    s.dh.swap(s.dh_prev);
    s.dlh.swap(s.dlh_prev);
    s.dlc.swap(s.dlc_prev);
  }
}

}  // namespace

WindowSums window_backprop(const nn::NetworkParams& params, nn::NetworkState& state,
                           const Window& window, LossKind kind, const SumWeights& weights,
                           const std::set<std::string>& freeze, nn::NetworkParams* grad) {
  const auto& sh = params.shape;
  const std::size_t ng = sh.gates, no = sh.others, nu = sh.observables;
  const std::size_t n_other_t = kind == LossKind::kFirstPass ? no : nu;
  const std::size_t n = window.steps;
  if (window.inputs.size() != n * nu || window.gate_targets.size() != n * ng ||
      window.other_targets.size() != n * n_other_t) {
    throw UsageError("bptt: window buffers do not match the network shape");
  }
  const auto slots = params.observable_slots();

  thread_local Scratch s;
  const bool backprop = grad != nullptr;
  if (backprop) {
    if (s.caches.size() < n) s.caches.resize(n);
    s.d_gates.assign(n * ng, 0.0);
    s.d_others.assign(n * no, 0.0);
  }
  s.gates.resize(ng);
  s.others.resize(no);

  WindowSums sums;
  for (std::size_t t = 0; t < n; ++t) {
    nn::forward_step(params, window.inputs.subspan(t * nu, nu), state, s.gates, s.others,
                     backprop ? &s.caches[t] : nullptr);
    const double* gt = window.gate_targets.data() + t * ng;
    const double* ot = window.other_targets.data() + t * n_other_t;
    for (std::size_t j = 0; j < ng; ++j) {
      const double d = s.gates[j] - gt[j];
      if (kind == LossKind::kFirstPass) {
        sums.gate += d * d;
        if (backprop) s.d_gates[t * ng + j] = weights.gate * 2.0 * d;
      } else {
        sums.gate += std::abs(d);
        if (backprop) s.d_gates[t * ng + j] = weights.gate * sign(d);
      }
    }
    for (std::size_t j = 0; j < n_other_t; ++j) {
      const std::size_t slot = kind == LossKind::kFirstPass ? j : slots[j];
      const double d = s.others[slot] - ot[j];
      sums.other += d * d;
      if (backprop) s.d_others[t * no + slot] = weights.other * 2.0 * d;
    }
  }
  sums.gate_count = n * ng;
  sums.other_count = n * n_other_t;
  if (backprop && n > 0) backward(params, s, n, freeze, *grad);
  return sums;
}

void add_regularization_gradient(const nn::NetworkParams& params, double lambda,
                                 const std::set<std::string>& freeze, nn::NetworkParams& grad) {
  std::size_t n = 0;
  for (const auto& ref : params.tensors()) {
    if (ref.weight_matrix && !freeze.count(ref.component)) n += ref.tensor->size();
  }
  if (n == 0 || lambda == 0.0) return;
  const double c = 2.0 * lambda / static_cast<double>(n);
  const auto src = params.tensors();
  auto dst = grad.tensors();
  for (std::size_t k = 0; k < src.size(); ++k) {
    if (!src[k].weight_matrix || freeze.count(src[k].component)) continue;
    simd::kernels().axpy(c, src[k].tensor->data.data(), dst[k].tensor->data.data(),
                         src[k].tensor->size());
  }
}

void check_gradient(const nn::NetworkParams& grad) {
  for (const auto& ref : grad.tensors()) {
    for (double x : ref.tensor->data) {
      if (!std::isfinite(x)) throw NumericalError("non-finite gradient in " + ref.name);
    }
  }
}

WindowGradient gradient(const nn::NetworkParams& params, const nn::NetworkState& state,
                        const Window& window, LossKind kind, double lambda, double eta,
                        const std::set<std::string>& freeze) {
  const auto& sh = params.shape;
  const double n = static_cast<double>(window.steps);
  const double n_gate = n * static_cast<double>(sh.gates);
  const double n_other =
      n * static_cast<double>(kind == LossKind::kFirstPass ? sh.others : sh.observables);
  SumWeights w;
  if (kind == LossKind::kFirstPass) {
    w.gate = n_gate > 0 ? 1.0 / n_gate : 0.0;
    w.other = n_other > 0 ? 1.0 / n_other : 0.0;
  } else {
    w.gate = n_gate > 0 ? eta / n_gate : 0.0;
    w.other = n_other > 0 ? 1.0 / n_other : 0.0;
  }
  WindowGradient out{params.zeros_like(), {}};
  nn::NetworkState st = state;
  const WindowSums sums = window_backprop(params, st, window, kind, w, freeze, &out.grad);
  add_regularization_gradient(params, lambda, freeze, out.grad);
  check_gradient(out.grad);

  const double t1 = kind == LossKind::kFirstPass ? sums.gate : sums.other;
  const double t2 = kind == LossKind::kFirstPass ? sums.other : sums.gate;
  const double c1 = kind == LossKind::kFirstPass ? n_gate : n_other;
  const double c2 = kind == LossKind::kFirstPass ? n_other : n_gate;
  out.loss.term1 = c1 > 0 ? t1 / c1 : 0.0;
  out.loss.term2 = c2 > 0 ? t2 / c2 : 0.0;
  out.loss.reg = regularization(params, freeze);
  out.loss.total = out.loss.term1 + (kind == LossKind::kFirstPass ? 1.0 : eta) * out.loss.term2 +
                   lambda * out.loss.reg;
  return out;
}

}  // namespace gatenet::train
