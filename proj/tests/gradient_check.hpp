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

// Central-difference oracle for the BPTT gradients, shared by the unit
// tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "gatenet/train/bptt.hpp"
#include "test_util.hpp"

namespace gatenet::testing {

struct GradientCase {
  nn::NetworkParams params;
  nn::NetworkState state;
  std::vector<double> inputs, gate_targets, other_targets;

  train::Window window() const {
    train::Window w;
    w.steps = inputs.size() / params.shape.observables;
    w.inputs = inputs;
    w.gate_targets = gate_targets;
    w.other_targets = other_targets;
    return w;
  }
};

// Window of `steps` carried recurrent steps starting from a random
// non-trivial state.
inline GradientCase make_gradient_case(std::uint64_t seed, train::LossKind kind,
                                       std::size_t steps = 10) {
  GradientCase c{small_network(seed), {}, {}, {}, {}};
  nn::Rng rng(seed * 7 + 1);
  const auto& s = c.params.shape;
  c.state.reset(s, random_vector(rng, s.gates, 0.0, 1.0));
  c.state.lstm_hidden = random_vector(rng, s.lstm_width, -0.5, 0.5);
  c.state.lstm_cell = random_vector(rng, s.lstm_width, -1.0, 1.0);
  c.inputs = random_vector(rng, steps * s.observables, 0.0, 1.0);
  // Targets are the network's own outputs plus small noise: residuals of a
  // few percent keep the loss small relative to its gradient, so central
  // differences are not swamped by rounding in the loss value.
  const std::size_t n_other = kind == train::LossKind::kFirstPass ? s.others : s.observables;
  const auto slots = c.params.observable_slots();
  nn::NetworkState st = c.state;
  std::vector<double> g(s.gates), o(s.others);
  for (std::size_t t = 0; t < steps; ++t) {
    nn::forward_step(c.params,
                     std::span<const double>(c.inputs).subspan(t * s.observables, s.observables),
                     st, g, o);
    for (double x : g) c.gate_targets.push_back(x + rng.uniform(-0.05, 0.05));
    for (std::size_t j = 0; j < n_other; ++j) {
      const double y = kind == train::LossKind::kFirstPass ? o[j] : o[slots[j]];
      c.other_targets.push_back(y + rng.uniform(-0.05, 0.05));
    }
  }
  return c;
}

struct GradientMismatch {
  std::string tensor;
  std::size_t index;
  double analytic, numeric;
};

struct GradientCheck {
  std::size_t checked = 0;
  double worst_rel = 0.0;                 // over elements compared relatively
  std::vector<std::string> components;    // components with a compared element
  std::vector<GradientMismatch> failures; // includes non-zero frozen gradients
};

// Central differences with step 1e-6 on every element of every tensor.
// Elements where both values are below 1e-8 are compared absolutely.
inline GradientCheck check_against_finite_differences(GradientCase& c, train::LossKind kind,
                                                      double lambda, double eta,
                                                      const std::set<std::string>& freeze = {}) {
  const auto analytic = train::gradient(c.params, c.state, c.window(), kind, lambda, eta, freeze);
  const double h = 1e-6;
  GradientCheck out;
  auto refs = c.params.tensors();
  const auto grads = analytic.grad.tensors();
  for (std::size_t k = 0; k < refs.size(); ++k) {
    const bool frozen = freeze.count(refs[k].component) != 0;
    for (std::size_t i = 0; i < refs[k].tensor->size(); ++i) {
      const double a = grads[k].tensor->data[i];
      if (frozen) {
        if (a != 0.0) out.failures.push_back({refs[k].name, i, a, 0.0});
        continue;
      }
      double& w = refs[k].tensor->data[i];
      const double w0 = w;
      w = w0 + h;
      const double lp =
          train::gradient(c.params, c.state, c.window(), kind, lambda, eta, freeze).loss.total;
      w = w0 - h;
      const double lm =
          train::gradient(c.params, c.state, c.window(), kind, lambda, eta, freeze).loss.total;
      w = w0;
      const double fd = (lp - lm) / (2.0 * h);
      bool ok;
      if (std::abs(fd) < 1e-8 && std::abs(a) < 1e-8) {
        ok = std::abs(a - fd) < 1e-8;
      } else {
        const double rel = std::abs(a - fd) / std::max(std::abs(a), std::abs(fd));
        out.worst_rel = std::max(out.worst_rel, rel);
        ok = rel < 1e-4;
      }
      if (!ok) out.failures.push_back({refs[k].name, i, a, fd});
      if (std::find(out.components.begin(), out.components.end(), refs[k].component) ==
          out.components.end()) {
        out.components.push_back(refs[k].component);
      }
      ++out.checked;
    }
  }
  return out;
}

}  // namespace gatenet::testing
