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

#include "gatenet/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gatenet/parallel.hpp"
#include "gatenet/train/adam.hpp"
#include "gatenet/train/bptt.hpp"

namespace gatenet::train {

TrainingDivergedError::TrainingDivergedError(int epoch, std::string what,
                                             nn::NetworkParams last_good)
    : NumericalError("training diverged in epoch " + std::to_string(epoch) + ": " + what),
      epoch_(epoch),
      last_good_(std::move(last_good)) {}

namespace {

// One training sequence in network units; step i maps sample i to i + 1.
struct Sequence {
  std::size_t steps = 0;
  std::vector<double> inputs, gate_targets, other_targets;
  std::vector<double> initial_gates;  // first pass only
  std::vector<double> first_input;    // normalized observables at sample 0
};

std::vector<std::size_t> columns(const sim::Trajectory& seg, const std::vector<std::string>& names,
                                 const std::vector<std::size_t>& vars) {
  std::vector<std::size_t> out;
  for (std::size_t v : vars) {
    try {
      out.push_back(seg.index_of(names.at(v)));
    } catch (const Error&) {
      throw DataError("segment at CL " + std::to_string(seg.cycle_length()) +
                      " ms has no column '" + names.at(v) + "'");
    }
  }
  return out;
}

Sequence full_state_sequence(const nn::NetworkParams& p, const sim::Trajectory& seg) {
  const auto obs = columns(seg, p.variable_names, p.partition.observables);
  const auto gates = columns(seg, p.variable_names, p.partition.gnn_gates);
  const auto others = columns(seg, p.variable_names, p.partition.lstm_vars);
  const std::size_t T = seg.samples();
  if (T < 2) throw DataError("segment too short for training");
  Sequence s;
  s.steps = T - 1;
  const std::size_t nu = obs.size(), ng = gates.size(), no = others.size();
  s.inputs.resize(s.steps * nu);
  s.gate_targets.resize(s.steps * ng);
  s.other_targets.resize(s.steps * no);
  std::vector<double> raw_u(nu), raw_o(no);
  for (std::size_t i = 0; i < s.steps; ++i) {
    for (std::size_t j = 0; j < nu; ++j) raw_u[j] = seg.at(i, obs[j]);
    nn::normalize_observables(p, raw_u, std::span(s.inputs).subspan(i * nu, nu));
    for (std::size_t j = 0; j < ng; ++j) s.gate_targets[i * ng + j] = seg.at(i + 1, gates[j]);
    for (std::size_t j = 0; j < no; ++j) raw_o[j] = seg.at(i + 1, others[j]);
    nn::normalize_others(p, raw_o, std::span(s.other_targets).subspan(i * no, no));
  }
  s.initial_gates.resize(ng);
  for (std::size_t j = 0; j < ng; ++j) s.initial_gates[j] = seg.at(0, gates[j]);
  s.first_input.assign(s.inputs.begin(), s.inputs.begin() + static_cast<std::ptrdiff_t>(nu));
  return s;
}

Sequence observable_sequence(const nn::NetworkParams& p, const sim::Trajectory& seg) {
  const auto obs = columns(seg, p.variable_names, p.partition.observables);
  const std::size_t T = seg.samples();
  if (T < 2) throw DataError("segment too short for training");
  Sequence s;
  s.steps = T - 1;
  const std::size_t nu = obs.size();
  s.inputs.resize(s.steps * nu);
  s.other_targets.resize(s.steps * nu);
  std::vector<double> raw(nu);
  for (std::size_t i = 0; i < s.steps; ++i) {
    for (std::size_t j = 0; j < nu; ++j) raw[j] = seg.at(i, obs[j]);
    nn::normalize_observables(p, raw, std::span(s.inputs).subspan(i * nu, nu));
    for (std::size_t j = 0; j < nu; ++j) raw[j] = seg.at(i + 1, obs[j]);
    nn::normalize_observables(p, raw, std::span(s.other_targets).subspan(i * nu, nu));
  }
  s.first_input.assign(s.inputs.begin(), s.inputs.begin() + static_cast<std::ptrdiff_t>(nu));
  return s;
}

// Gate state at a segment start when the true gates are unknown: the
// network's own steady state for the first input.
std::vector<double> steady_gates(const nn::NetworkParams& p, std::span<const double> v_norm) {
  std::vector<double> x(v_norm.begin(), v_norm.end());
  std::vector<double> y;
  for (const auto& layer : p.phi1) {
    y.resize(layer.outputs());
    layer.forward(x, y);
    x.swap(y);
  }
  std::vector<double> h(p.shape.gates);
  nn::gnn_h_inf(p.gnn, x, h);
  return h;
}

void start_state(const nn::NetworkParams& p, LossKind kind, const Sequence& s,
                 nn::NetworkState& state) {
  if (kind == LossKind::kFirstPass) {
    state.reset(p.shape, s.initial_gates);
  } else {
    const auto h = steady_gates(p, s.first_input);
    state.reset(p.shape, h);
  }
}

Window slice(const Sequence& s, std::size_t begin, std::size_t end, std::size_t nu,
             std::size_t ng, std::size_t n_other) {
  Window w;
  w.steps = end - begin;
  w.inputs = std::span<const double>(s.inputs).subspan(begin * nu, w.steps * nu);
  w.gate_targets = std::span<const double>(s.gate_targets).subspan(begin * ng, w.steps * ng);
  w.other_targets =
      std::span<const double>(s.other_targets).subspan(begin * n_other, w.steps * n_other);
  return w;
}

class Loop {
 public:
  Loop(LossKind kind, const TrainConfig& cfg, std::vector<Sequence> train,
       std::vector<Sequence> val)
      : kind_(kind), cfg_(cfg), train_(std::move(train)), val_(std::move(val)) {}

  LossTerms evaluate(const nn::NetworkParams& p, const std::vector<Sequence>& seqs) const {
    std::vector<WindowSums> sums(seqs.size());
    parallel_for(seqs.size(), cfg_.threads, [&](std::size_t i) {
      const Sequence& s = seqs[i];
      nn::NetworkState st;
      start_state(p, kind_, s, st);
      const std::size_t warm = std::min(cfg_.warmup_steps, s.steps);
      window_backprop(p, st, slice(s, 0, warm, nu(p), ng(p), n_other(p)), kind_, {}, cfg_.freeze,
                      nullptr);
      sums[i] = window_backprop(p, st, slice(s, warm, s.steps, nu(p), ng(p), n_other(p)), kind_,
                                {}, cfg_.freeze, nullptr);
    });
    WindowSums total;
    for (const auto& s : sums) total += s;
    return terms(p, total);
  }

  TrainResult run(nn::NetworkParams params, const TrainCallbacks& cb) {
    TrainResult result;
    result.report.kind = kind_;
    auto record = [&](int epoch) {
      EpochRecord r;
      r.epoch = epoch;
      r.train = evaluate(params, train_);
      r.val_total = val_.empty() ? 0.0 : evaluate(params, val_).total;
      if (!std::isfinite(r.train.total) || !std::isfinite(r.val_total)) {
        throw TrainingDivergedError(epoch, "loss is not finite", last_good_);
      }
      result.report.history.push_back(r);
      if (cb.on_epoch) cb.on_epoch(r, params);
    };
    last_good_ = params;
    record(0);

    Adam adam(params, cfg_.learning_rate, cfg_.beta1, cfg_.beta2, cfg_.epsilon);
    const std::size_t n = train_.size();
    std::vector<nn::NetworkParams> grads(n, params.zeros_like());
    std::vector<nn::NetworkState> states(n);
    std::vector<char> active(n);
    nn::NetworkParams total = params.zeros_like();
    const std::size_t W = cfg_.bptt_window;

    for (int epoch = 1; epoch <= cfg_.epochs; ++epoch) {
      std::size_t n_windows = 0;
      for (std::size_t i = 0; i < n; ++i) {
        start_state(params, kind_, train_[i], states[i]);
        const std::size_t warm = std::min(cfg_.warmup_steps, train_[i].steps);
        window_backprop(params, states[i],
                        slice(train_[i], 0, warm, nu(params), ng(params), n_other(params)), kind_,
                        {}, cfg_.freeze, nullptr);
        n_windows = std::max(n_windows, (train_[i].steps - warm + W - 1) / W);
      }
      for (std::size_t w = 0; w < n_windows; ++w) {
        // Element counts over the whole minibatch fix the averaging weights.
        std::size_t steps_total = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t b = std::min(cfg_.warmup_steps, train_[i].steps) + w * W;
          const std::size_t e = std::min(b + W, train_[i].steps);
          active[i] = b < e;
          if (b < e) steps_total += e - b;
        }
        if (steps_total == 0) continue;
        const SumWeights weights = sum_weights(params, steps_total);
        parallel_for(n, cfg_.threads, [&](std::size_t i) {
          if (!active[i]) return;
          for (auto& ref : grads[i].tensors()) ref.tensor->fill(0.0);
          const std::size_t b = std::min(cfg_.warmup_steps, train_[i].steps) + w * W;
          const std::size_t e = std::min(b + W, train_[i].steps);
          window_backprop(params, states[i],
                          slice(train_[i], b, e, nu(params), ng(params), n_other(params)), kind_,
                          weights, cfg_.freeze, &grads[i]);
        });
        // Fixed-order reduction keeps the update independent of scheduling.
        for (auto& ref : total.tensors()) ref.tensor->fill(0.0);
        auto dst = total.tensors();
        for (std::size_t i = 0; i < n; ++i) {
          if (!active[i]) continue;
          const auto src = grads[i].tensors();
          for (std::size_t k = 0; k < dst.size(); ++k) {
            auto& d = dst[k].tensor->data;
            const auto& s = src[k].tensor->data;
            for (std::size_t j = 0; j < d.size(); ++j) d[j] += s[j];
          }
        }
        add_regularization_gradient(params, cfg_.lambda, cfg_.freeze, total);
        try {
          check_gradient(total);
        } catch (const NumericalError& e) {
          throw TrainingDivergedError(epoch, e.what(), last_good_);
        }
        adam.step(params, total, cfg_.freeze);
      }
      record(epoch);
      last_good_ = params;
    }
    result.report.final = result.report.history.back().train;
    result.params = std::move(params);
    return result;
  }

 private:
  static std::size_t nu(const nn::NetworkParams& p) { return p.shape.observables; }
  static std::size_t ng(const nn::NetworkParams& p) { return p.shape.gates; }
  std::size_t n_other(const nn::NetworkParams& p) const {
    return kind_ == LossKind::kFirstPass ? p.shape.others : p.shape.observables;
  }

  SumWeights sum_weights(const nn::NetworkParams& p, std::size_t steps) const {
    const double n_gate = static_cast<double>(steps * ng(p));
    const double n_oth = static_cast<double>(steps * n_other(p));
    SumWeights w;
    w.gate = (kind_ == LossKind::kFirstPass ? 1.0 : cfg_.eta) / n_gate;
    w.other = 1.0 / n_oth;
    return w;
  }

  LossTerms terms(const nn::NetworkParams& p, const WindowSums& s) const {
    LossTerms t;
    const double g = s.gate_count ? s.gate / static_cast<double>(s.gate_count) : 0.0;
    const double o = s.other_count ? s.other / static_cast<double>(s.other_count) : 0.0;
    t.reg = regularization(p, cfg_.freeze);
    if (kind_ == LossKind::kFirstPass) {
      t.term1 = g;
      t.term2 = o;
      t.total = g + o + cfg_.lambda * t.reg;
    } else {
      t.term1 = o;
      t.term2 = g;
      t.total = o + cfg_.eta * g + cfg_.lambda * t.reg;
    }
    return t;
  }

  LossKind kind_;
  TrainConfig cfg_;
  std::vector<Sequence> train_, val_;
  nn::NetworkParams last_good_;
};

template <typename Build>
std::vector<Sequence> build(const sim::Dataset& ds, const std::vector<std::size_t>& idx,
                            std::size_t threads, Build&& fn) {
  std::vector<Sequence> out(idx.size());
  parallel_for(idx.size(), threads, [&](std::size_t i) {
    if (idx[i] >= ds.segments.size()) throw DataError("segment index out of range");
    out[i] = fn(ds.segments[idx[i]]);
  });
  return out;
}

}  // namespace

TrainResult train_first_pass(const model::IonicModel& model, const sim::Dataset& dataset,
                             const TrainConfig& config, const TrainCallbacks& callbacks) {
  config.validate();
  if (dataset.train_indices.empty()) throw DataError("dataset has no training segments");
  if (dataset.model_key != model.key()) {
    throw DataError("dataset was generated by '" + dataset.model_key + "', not '" + model.key() +
                    "'");
  }
  nn::NetworkParams params = nn::init_network(model, config.seed);
  std::vector<const sim::Trajectory*> train_segs;
  for (std::size_t i : dataset.train_indices) train_segs.push_back(&dataset.segments.at(i));
  params.norm = nn::compute_normalization(model, train_segs);
  params.dt = dataset.dt;
  params.provenance = {config.seed, config.lambda, 0.0, 1};

  auto fn = [&](const sim::Trajectory& seg) { return full_state_sequence(params, seg); };
  Loop loop(LossKind::kFirstPass, config, build(dataset, dataset.train_indices, config.threads, fn),
            build(dataset, dataset.validation_indices, config.threads, fn));
  return loop.run(std::move(params), callbacks);
}

TrainResult train_second_pass(const nn::NetworkParams& pass1, const sim::Dataset& dataset,
                              const TrainConfig& config, const TrainCallbacks& callbacks) {
  config.validate();
  if (dataset.train_indices.empty()) throw DataError("dataset has no training segments");
  if (dataset.model_key != pass1.model_key) {
    throw DataError("dataset was generated by '" + dataset.model_key + "', checkpoint is for '" +
                    pass1.model_key + "'");
  }
  const nn::NetworkParams reference = pass1;
  const std::size_t ng = reference.shape.gates;

  // Reference gate trajectory of the frozen pass-1 network.
  auto fn = [&](const sim::Trajectory& seg) {
    Sequence s = observable_sequence(reference, seg);
    nn::NetworkState st;
    start_state(reference, LossKind::kSecondPass, s, st);
    s.gate_targets.resize(s.steps * ng);
    const std::size_t nu = reference.shape.observables;
    std::vector<double> others(reference.shape.others);
    for (std::size_t i = 0; i < s.steps; ++i) {
      nn::forward_step(reference, std::span<const double>(s.inputs).subspan(i * nu, nu), st,
                       std::span(s.gate_targets).subspan(i * ng, ng), others);
    }
    return s;
  };

  nn::NetworkParams params = pass1;
  params.provenance = {config.seed, config.lambda, config.eta, 2};
  Loop loop(LossKind::kSecondPass, config,
            build(dataset, dataset.train_indices, config.threads, fn),
            build(dataset, dataset.validation_indices, config.threads, fn));
  return loop.run(std::move(params), callbacks);
}

std::vector<double> one_step_gate_rmse(const nn::NetworkParams& p, const sim::Dataset& dataset,
                                       const std::vector<std::size_t>& indices) {
  const std::size_t ng = p.shape.gates, nu = p.shape.observables;
  std::vector<double> sq(ng, 0.0);
  std::size_t count = 0;
  std::vector<double> raw(nu), vn(nu), h(ng), rho(ng), hinf(ng), x, y;
  for (std::size_t idx : indices) {
    const auto& seg = dataset.segments.at(idx);
    const auto obs = columns(seg, p.variable_names, p.partition.observables);
    const auto gates = columns(seg, p.variable_names, p.partition.gnn_gates);
    for (std::size_t i = 0; i + 1 < seg.samples(); ++i) {
      for (std::size_t j = 0; j < nu; ++j) raw[j] = seg.at(i, obs[j]);
      nn::normalize_observables(p, raw, vn);
      x = vn;
      for (const auto& layer : p.phi1) {
        y.resize(layer.outputs());
        layer.forward(x, y);
        x.swap(y);
      }
      nn::gnn_h_inf(p.gnn, x, hinf);
      nn::gnn_rho(p.gnn, x, rho);
      for (std::size_t j = 0; j < ng; ++j) h[j] = seg.at(i, gates[j]);
      nn::gnn_update(h, rho, hinf);
      for (std::size_t j = 0; j < ng; ++j) {
        const double d = h[j] - seg.at(i + 1, gates[j]);
        sq[j] += d * d;
      }
      ++count;
    }
  }
  for (double& s : sq) s = count ? std::sqrt(s / static_cast<double>(count)) : 0.0;
  return sq;
}

}  // namespace gatenet::train
