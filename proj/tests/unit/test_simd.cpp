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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gatenet/nn/network.hpp"
#include "gatenet/simd/kernels.hpp"
#include "gatenet/train/bptt.hpp"
#include "test_util.hpp"

namespace gatenet {
namespace {

using simd::KernelTable;

std::vector<double> rnd(nn::Rng& rng, std::size_t n) { return testing::random_vector(rng, n, -1.0, 1.0); }

// Long-double oracle.
std::vector<double> naive_gemv(const std::vector<double>& w, std::size_t r, std::size_t c,
                               const std::vector<double>& x, const std::vector<double>* b) {
  std::vector<double> y(r);
  for (std::size_t i = 0; i < r; ++i) {
    long double s = b ? (*b)[i] : 0.0L;
    for (std::size_t j = 0; j < c; ++j) s += static_cast<long double>(w[i * c + j]) * x[j];
    y[i] = static_cast<double>(s);
  }
  return y;
}

class KernelTest : public ::testing::TestWithParam<simd::Isa> {
 protected:
  const KernelTable* table() const {
    return GetParam() == simd::Isa::kScalar ? &simd::scalar_kernels() : simd::avx2_kernels();
  }
  void SetUp() override {
    if (!table()) GTEST_SKIP() << "AVX2 unavailable on this CPU";
  }
};

TEST_P(KernelTest, MatchesOracleAcrossShapes) {
  const auto& k = *table();
  nn::Rng rng(3);
  for (std::size_t r : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 30u, 31u, 120u}) {
    for (std::size_t c : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 13u, 30u, 33u}) {
      const auto w = rnd(rng, r * c), x = rnd(rng, c), b = rnd(rng, r), dy = rnd(rng, r);
      std::vector<double> y(r);
      k.gemv(w.data(), r, c, x.data(), b.data(), y.data());
      const auto ref = naive_gemv(w, r, c, x, &b);
      for (std::size_t i = 0; i < r; ++i) ASSERT_NEAR(y[i], ref[i], 1e-13) << r << "x" << c;
      k.gemv(w.data(), r, c, x.data(), nullptr, y.data());
      const auto ref0 = naive_gemv(w, r, c, x, nullptr);
      for (std::size_t i = 0; i < r; ++i) ASSERT_NEAR(y[i], ref0[i], 1e-13);

      std::vector<double> dx(c, 0.5);
      k.gemv_t_acc(w.data(), r, c, dy.data(), dx.data());
      for (std::size_t j = 0; j < c; ++j) {
        long double s = 0.5L;
        for (std::size_t i = 0; i < r; ++i) s += static_cast<long double>(w[i * c + j]) * dy[i];
        ASSERT_NEAR(dx[j], static_cast<double>(s), 1e-13);
      }

      std::vector<double> dw(r * c, -0.25);
      k.ger_acc(dw.data(), r, c, dy.data(), x.data());
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) ASSERT_NEAR(dw[i * c + j], -0.25 + dy[i] * x[j], 1e-15);

      long double d = 0.0L;
      for (std::size_t j = 0; j < c; ++j) d += static_cast<long double>(x[j]) * w[j];
      ASSERT_NEAR(k.dot(x.data(), w.data(), c), static_cast<double>(d), 1e-13);

      std::vector<double> yy = b;
      k.axpy(0.3, dy.data(), yy.data(), r);
      for (std::size_t i = 0; i < r; ++i) ASSERT_NEAR(yy[i], b[i] + 0.3 * dy[i], 1e-15);
    }
  }
}

TEST_P(KernelTest, ZeroLengthIsANoOp) {
  const auto& k = *table();
  double y = 7.0;
  EXPECT_EQ(k.dot(&y, &y, 0), 0.0);
  k.axpy(2.0, &y, &y, 0);
  EXPECT_EQ(y, 7.0);
}

INSTANTIATE_TEST_SUITE_P(Isa, KernelTest, ::testing::Values(simd::Isa::kScalar, simd::Isa::kAvx2),
                         [](const auto& info) { return std::string(simd::isa_name(info.param)); });

// Restores the dispatch choice after each test.
class IsaGuard {
 public:
  IsaGuard() : saved_(simd::active_isa()) {}
  ~IsaGuard() { simd::set_isa(saved_); }

 private:
  simd::Isa saved_;
};

TEST(KernelDispatch, SetAndQuery) {
  IsaGuard guard;
  simd::set_isa(simd::Isa::kScalar);
  EXPECT_EQ(simd::active_isa(), simd::Isa::kScalar);
  EXPECT_EQ(&simd::kernels(), &simd::scalar_kernels());
  if (simd::avx2_kernels()) {
    simd::set_isa(simd::Isa::kAvx2);
    EXPECT_EQ(simd::active_isa(), simd::Isa::kAvx2);
    EXPECT_EQ(&simd::kernels(), simd::avx2_kernels());
  }
}

TEST(KernelDispatch, NetworkRolloutAndGradientAgreeAcrossIsas) {
  if (!simd::avx2_kernels()) GTEST_SKIP() << "AVX2 unavailable on this CPU";
  IsaGuard guard;
  auto params = testing::small_network(5, 30, 30);
  nn::Rng rng(11);
  constexpr std::size_t kSteps = 40;
  const auto inputs = testing::random_vector(rng, 2 * kSteps, -0.2, 1.2);
  const auto gates = testing::random_vector(rng, 2 * kSteps, 0.0, 1.0);
  const auto others = testing::random_vector(rng, 3 * kSteps, 0.0, 1.0);
  const train::Window w{kSteps, inputs, gates, others};
  nn::NetworkState state;
  state.reset(params.shape, std::vector<double>{0.3, 0.6});

  auto run = [&](simd::Isa isa) {
    simd::set_isa(isa);
    return train::gradient(params, state, w, train::LossKind::kFirstPass, 1e-4, 0.0, {});
  };
  const auto a = run(simd::Isa::kScalar);
  const auto b = run(simd::Isa::kAvx2);
  EXPECT_NEAR(a.loss.total, b.loss.total, 1e-13 * std::abs(a.loss.total));
  const auto ta = a.grad.tensors();
  const auto tb = b.grad.tensors();
  ASSERT_EQ(ta.size(), tb.size());
  for (std::size_t t = 0; t < ta.size(); ++t) {
    double scale = 0.0;
    for (double g : ta[t].tensor->data) scale = std::max(scale, std::abs(g));
    for (std::size_t i = 0; i < ta[t].tensor->size(); ++i) {
      ASSERT_NEAR(ta[t].tensor->data[i], tb[t].tensor->data[i], 1e-11 * (scale + 1e-300)) << ta[t].name;
    }
  }

  std::vector<double> v0{0.1, 0.4};
  simd::set_isa(simd::Isa::kScalar);
  nn::NetworkState s1 = state;
  const auto r1 = nn::rollout(v0, 200, params, s1);
  simd::set_isa(simd::Isa::kAvx2);
  nn::NetworkState s2 = state;
  const auto r2 = nn::rollout(v0, 200, params, s2);
  for (std::size_t i = 0; i < r1.size(); ++i)
    for (std::size_t j = 0; j < r1[i].size(); ++j) ASSERT_NEAR(r1[i][j], r2[i][j], 1e-9);
}

}  // namespace
}  // namespace gatenet
