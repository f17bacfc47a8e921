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

#include "gatenet/train/adam.hpp"

#include <cmath>

namespace gatenet::train {

Adam::Adam(const nn::NetworkParams& shape_like, double learning_rate, double beta1, double beta2,
           double epsilon)
    : lr_(learning_rate), b1_(beta1), b2_(beta2), eps_(epsilon) {
  for (const auto& ref : shape_like.tensors()) {
    m_.emplace_back(ref.tensor->size(), 0.0);
    v_.emplace_back(ref.tensor->size(), 0.0);
  }
}

void Adam::step(nn::NetworkParams& params, const nn::NetworkParams& grad,
                const std::set<std::string>& freeze) {
  ++t_;
  const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
  auto p = params.tensors();
  const auto g = grad.tensors();
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (freeze.count(p[k].component)) continue;
    auto& w = p[k].tensor->data;
    const auto& gk = g[k].tensor->data;
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = b1_ * m[i] + (1.0 - b1_) * gk[i];
      v[i] = b2_ * v[i] + (1.0 - b2_) * gk[i] * gk[i];
      w[i] -= lr_ * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
    }
  }
}

}  // namespace gatenet::train
