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

#include <atomic>
#include <cstdlib>
#include <string>

#include "gatenet/error.hpp"
#include "gatenet/simd/kernels.hpp"

namespace gatenet::simd {

#if defined(GATENET_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(GATENET_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa default_isa() {
  if (const char* env = std::getenv("GATENET_ISA")) {
    if (std::string(env) == "scalar") return Isa::kScalar;
  }
  return cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{default_isa()};
  return isa;
}

}  // namespace

const KernelTable* avx2_kernels() {
#if defined(GATENET_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& kernels() {
  if (current().load(std::memory_order_relaxed) == Isa::kAvx2) {
    if (const KernelTable* t = avx2_kernels()) return *t;
  }
  return scalar_kernels();
}

Isa active_isa() {
  return (current().load() == Isa::kAvx2 && avx2_kernels()) ? Isa::kAvx2
                                                           : Isa::kScalar;
}

void set_isa(Isa isa) {
  if (isa == Isa::kAvx2 && !avx2_kernels()) {
    throw UsageError("AVX2 kernels are not available on this machine");
  }
  current().store(isa);
}

std::string_view isa_name(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

}  // namespace gatenet::simd
