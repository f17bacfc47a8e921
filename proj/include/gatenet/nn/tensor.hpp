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

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace gatenet::nn {

// Row-major dense matrix of doubles; vectors are rows x 1.
struct Tensor {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  std::size_t size() const { return data.size(); }
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> span() { return data; }
  std::span<const double> span() const { return data; }
  void fill(double x);

  bool operator==(const Tensor&) const = default;
};

// Deterministic uniform draws in [lo, hi) from a 64-bit Mersenne Twister,
// converted without std::uniform_real_distribution so sequences are
// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform(double lo, double hi);
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Glorot/Xavier uniform fill: U(-sqrt(6/(fan_in+fan_out)), +...).
void glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng);

double sigmoid(double x);

}  // namespace gatenet::nn
