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

// Small fixtures shared by the unit tests.

#include <cstdint>
#include <vector>

#include "gatenet/nn/network.hpp"

namespace gatenet::testing {

// Five-variable toy layout: two observables, two gates, one extra LSTM
// variable. Widths are tiny so finite differences stay cheap.
inline nn::NetworkParams small_network(std::uint64_t seed, std::size_t width = 3,
                                       std::size_t lstm_width = 3) {
  nn::NetworkShape shape;
  shape.observables = 2;
  shape.gates = 2;
  shape.others = 3;
  shape.width = width;
  shape.lstm_width = lstm_width;
  nn::NetworkParams p = nn::init_network(shape, seed);
  p.model_key = "toy";
  p.variable_names = {"V", "C", "g1", "g2", "X"};
  p.partition.observables = {0, 1};
  p.partition.gnn_gates = {2, 3};
  p.partition.lstm_vars = {0, 1, 4};
  // Move every tensor away from its structured initial value so that no
  // gradient component vanishes by symmetry.
  nn::Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (auto& ref : p.tensors()) {
    for (double& w : ref.tensor->data) w += rng.uniform(-0.5, 0.5);
  }
  return p;
}

inline std::vector<double> random_vector(nn::Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace gatenet::testing
