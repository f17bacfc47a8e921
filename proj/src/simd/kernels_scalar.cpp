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

#include "gatenet/simd/kernels.hpp"

namespace gatenet::simd {

namespace {

void gemv(const double* w, std::size_t rows, std::size_t cols, const double* x,
          const double* b, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = w + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] = b ? acc + b[r] : acc;
  }
}

void gemv_t_acc(const double* w, std::size_t rows, std::size_t cols,
                const double* dy, double* dx) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double g = dy[r];
    const double* row = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) dx[c] += row[c] * g;
  }
}

void ger_acc(double* dw, std::size_t rows, std::size_t cols, const double* dy,
             const double* x) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double g = dy[r];
    double* row = dw + r * cols;
    for (std::size_t c = 0; c < cols; ++c) row[c] += g * x[c];
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

constexpr KernelTable kTable{gemv, gemv_t_acc, ger_acc, dot, axpy};

}  // namespace

const KernelTable& scalar_kernels() { return kTable; }

}  // namespace gatenet::simd
