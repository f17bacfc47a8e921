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

#include <cmath>
#include <string>

#include "gatenet/error.hpp"
#include "gatenet/train/bptt.hpp"
#include "gradient_check.hpp"
#include "test_util.hpp"

namespace gatenet {
namespace {

using train::LossKind;

using Case = testing::GradientCase;

Case make_case(std::uint64_t seed, LossKind kind, std::size_t steps = 10) {
  return testing::make_gradient_case(seed, kind, steps);
}

void expect_matches_finite_differences(Case& c, LossKind kind, double lambda, double eta,
                                       const std::set<std::string>& freeze = {}) {
  const auto r = testing::check_against_finite_differences(c, kind, lambda, eta, freeze);
  for (const auto& f : r.failures) {
    ADD_FAILURE() << f.tensor << "[" << f.index << "] analytic " << f.analytic << " fd " << f.numeric;
  }
  EXPECT_GT(r.checked, 0u);
}

class GradientSeeds : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(GradientSeeds, FirstPassLossMatchesFiniteDifferences) {
  Case c = make_case(GetParam(), LossKind::kFirstPass);
  expect_matches_finite_differences(c, LossKind::kFirstPass, 1e-2, 0.0);
}

TEST_P(GradientSeeds, SecondPassLossMatchesFiniteDifferences) {
  Case c = make_case(GetParam(), LossKind::kSecondPass);
  expect_matches_finite_differences(c, LossKind::kSecondPass, 1e-2, 0.5);
}

TEST_P(GradientSeeds, FrozenComponentsGetZeroGradient) {
  Case c = make_case(GetParam(), LossKind::kSecondPass);
  expect_matches_finite_differences(c, LossKind::kSecondPass, 1e-2, 0.5,
                                    {"phi1", "phi2", "lstm", "phi3", "norm"});
}

TEST_P(GradientSeeds, FrozenGateBranchStillTrainsLstmBranch) {
  Case c = make_case(GetParam(), LossKind::kFirstPass);
  expect_matches_finite_differences(c, LossKind::kFirstPass, 0.0, 0.0, {"phi1", "gnn"});
}

INSTANTIATE_TEST_SUITE_P(Seeds, GradientSeeds, ::testing::Values(1u, 2u, 3u, 17u));

TEST(Gradient, WiderNetworkMatchesFiniteDifferences) {
  Case c{testing::small_network(5, 6, 5), {}, {}, {}, {}};
  nn::Rng rng(99);
  const auto& s = c.params.shape;
  c.state.reset(s, testing::random_vector(rng, s.gates, 0.0, 1.0));
  c.inputs = testing::random_vector(rng, 10 * s.observables, 0.0, 1.0);
  c.gate_targets = testing::random_vector(rng, 10 * s.gates, 0.0, 1.0);
  c.other_targets = testing::random_vector(rng, 10 * s.others, -1.0, 1.0);
  expect_matches_finite_differences(c, LossKind::kFirstPass, 1e-3, 0.0);
}

TEST(Gradient, PerfectFitWithoutRegularizationIsZero) {
  Case c = make_case(4, LossKind::kFirstPass);
  // Targets equal to the network's own outputs.
  const auto& s = c.params.shape;
  nn::NetworkState st = c.state;
  std::vector<double> g(s.gates), o(s.others);
  for (std::size_t t = 0; t < 10; ++t) {
    nn::forward_step(c.params, std::span<const double>(c.inputs).subspan(t * s.observables, s.observables),
                     st, g, o);
    std::copy(g.begin(), g.end(), c.gate_targets.begin() + static_cast<std::ptrdiff_t>(t * s.gates));
    std::copy(o.begin(), o.end(), c.other_targets.begin() + static_cast<std::ptrdiff_t>(t * s.others));
  }
  const auto r = train::gradient(c.params, c.state, c.window(), LossKind::kFirstPass, 0.0, 0.0);
  EXPECT_EQ(r.loss.total, 0.0);
  for (const auto& ref : r.grad.tensors()) {
    for (double x : ref.tensor->data) EXPECT_EQ(x, 0.0) << ref.name;
  }
}

TEST(Gradient, ReportsLossTermsAsMeans) {
  Case c = make_case(8, LossKind::kFirstPass, 1);
  const auto r = train::gradient(c.params, c.state, c.window(), LossKind::kFirstPass, 0.0, 0.0);
  nn::NetworkState st = c.state;
  std::vector<double> g(2), o(3);
  nn::forward_step(c.params, c.inputs, st, g, o);
  const auto expect = train::first_pass_loss(g, c.gate_targets, o, c.other_targets, c.params, 0.0);
  EXPECT_DOUBLE_EQ(r.loss.term1, expect.term1);
  EXPECT_DOUBLE_EQ(r.loss.term2, expect.term2);
}

TEST(Gradient, NonFiniteGradientNamesTensor) {
  nn::NetworkParams g = testing::small_network(1).zeros_like();
  g.lstm.w_h.data[3] = std::nan("");
  try {
    train::check_gradient(g);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("lstm.w_h"), std::string::npos);
  }
}

TEST(Gradient, WindowStateIsNotModified) {
  Case c = make_case(2, LossKind::kFirstPass);
  const nn::NetworkState before = c.state;
  train::gradient(c.params, c.state, c.window(), LossKind::kFirstPass, 0.0, 0.0);
  EXPECT_EQ(c.state, before);
}

}  // namespace
}  // namespace gatenet
