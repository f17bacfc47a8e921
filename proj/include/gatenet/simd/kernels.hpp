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

// Dense double-precision kernels used by the recurrent network. Every kernel
// has a portable scalar reference implementation; an AVX2/FMA variant is
// compiled separately and picked at runtime when the CPU supports it.
//
// All matrices are row-major with `cols` contiguous elements per row.

#include <cstddef>
#include <string_view>

namespace gatenet::simd {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  // y = W x + b (b may be null).
  void (*gemv)(const double* w, std::size_t rows, std::size_t cols,
               const double* x, const double* b, double* y);
  // dx += W^T dy.
  void (*gemv_t_acc)(const double* w, std::size_t rows, std::size_t cols,
                     const double* dy, double* dx);
  // dW += dy x^T.
  void (*ger_acc)(double* dw, std::size_t rows, std::size_t cols,
                  const double* dy, const double* x);
  // sum_i a[i] * b[i].
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x.
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_kernels();

// Null when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

// Kernel table in use. Defaults to the best supported ISA; the environment
// variable GATENET_ISA=scalar forces the reference kernels.
const KernelTable& kernels();
Isa active_isa();

// Overrides the runtime choice (tests and benchmarks). Throws UsageError
// when the requested ISA is unavailable.
void set_isa(Isa isa);

std::string_view isa_name(Isa isa);

}  // namespace gatenet::simd
