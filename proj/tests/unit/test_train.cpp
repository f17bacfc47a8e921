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
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gatenet/error.hpp"
#include "gatenet/model/models.hpp"
#include "gatenet/sim/dataset.hpp"
#include "gatenet/train/adam.hpp"
#include "gatenet/train/config.hpp"
#include "gatenet/train/loss.hpp"
#include "gatenet/train/trainer.hpp"
#include "test_util.hpp"

namespace gatenet {
namespace {

using train::TrainConfig;

const sim::Dataset& hh_dataset() {
  static const sim::Dataset ds = [] {
    sim::DatasetOptions o;
    o.cycle_lengths = {20.0, 25.0, 30.0, 35.0, 40.0};
    o.duration = 400.0;
    o.discard = 100.0;
    o.seed = 3;
    return sim::generate_dataset(model::hh1952(), o);
  }();
  return ds;
}

TrainConfig quick_config(int epochs) {
  auto c = TrainConfig::first_pass_defaults();
  c.epochs = epochs;
  c.seed = 5;
  return c;
}

TEST(Loss, FirstPassExamples) {
  const auto p = testing::small_network(1);
  const std::vector<double> g{0.5}, gt{0.3}, o{1.0}, ot{0.0};
  EXPECT_NEAR(train::first_pass_loss(g, gt, o, ot, p, 0.0).total, 1.04, 1e-15);
  const auto t = train::first_pass_loss(g, g, o, o, p, 0.0);
  EXPECT_EQ(t.total, 0.0);
  const auto r = train::first_pass_loss(g, g, o, o, p, 1e-4);
  EXPECT_NEAR(r.total, 1e-4 * train::regularization(p), 1e-18);
  EXPECT_GT(r.reg, 0.0);
}

TEST(Loss, SecondPassExamples) {
  const auto p = testing::small_network(1);
  const std::vector<double> v{0.3, 0.6};
  const auto t = train::second_pass_loss(v, v, std::vector<double>{0.2}, std::vector<double>{0.5}, p, 0.0, 2e-3);
  EXPECT_NEAR(t.total, 6e-4, 1e-15);
  EXPECT_NEAR(t.term2, 0.3, 1e-15);
  const std::vector<double> g{0.1, 0.9};
  EXPECT_EQ(train::second_pass_loss(v, v, g, g, p, 0.0, 2e-3).term2, 0.0);
  // eta = 0 reduces to data + regularization.
  const std::vector<double> w{0.4, 0.2};
  const auto a = train::second_pass_loss(v, w, g, std::vector<double>{0.0, 0.0}, p, 1e-4, 0.0);
  EXPECT_NEAR(a.total, train::mean_square_error(v, w) + 1e-4 * train::regularization(p), 1e-15);
}

TEST(Loss, NondecreasingInEta) {
  const auto p = testing::small_network(2);
  nn::Rng rng(3);
  const auto a = testing::random_vector(rng, 20, 0.0, 1.0), b = testing::random_vector(rng, 20, 0.0, 1.0);
  const auto g = testing::random_vector(rng, 30, 0.0, 1.0), r = testing::random_vector(rng, 30, 0.0, 1.0);
  double prev = -1.0;
  for (double eta : {0.0, 1e-4, 5e-4, 1e-3, 2e-3, 1.0}) {
    const double t = train::second_pass_loss(a, b, g, r, p, 1e-4, eta).total;
    EXPECT_GE(t, prev);
    prev = t;
  }
}

TEST(Loss, RegularizationCoversWeightMatricesOnly) {
  auto p = testing::small_network(4);
  const double base = train::regularization(p);
  for (double& b : p.phi2.bias.data) b += 100.0;
  for (double& b : p.gnn.b_tau.data) b += 100.0;
  p.norm.obs_scale = {1e6, 1e6};
  EXPECT_EQ(train::regularization(p), base);
  p.phi2.weight.data[0] += 1.0;
  EXPECT_NE(train::regularization(p), base);
  // Frozen tensors are excluded.
  auto q = testing::small_network(4);
  std::size_t n = 0;
  double sum = 0.0;
  for (const auto& ref : std::as_const(q).tensors()) {
    if (!ref.weight_matrix || ref.component != "gnn") continue;
    for (double w : ref.tensor->data) sum += w * w;
    n += ref.tensor->size();
  }
  EXPECT_NEAR(train::regularization(q, {"phi1", "phi2", "lstm", "phi3"}), sum / n, 1e-15);
}

TEST(Adam, FrozenTensorsAreBitwiseUnchanged) {
  auto p = testing::small_network(6);
  const auto before = p;
  auto g = p.zeros_like();
  for (auto& ref : g.tensors())
    for (double& x : ref.tensor->data) x = 1.0;
  train::Adam opt(p, 1e-2);
  const std::set<std::string> freeze{"phi1", "phi2", "lstm", "phi3"};
  for (int k = 0; k < 10; ++k) opt.step(p, g, freeze);
  EXPECT_EQ(opt.steps(), 10);
  EXPECT_EQ(p.phi1, before.phi1);
  EXPECT_EQ(p.phi2, before.phi2);
  EXPECT_EQ(p.lstm, before.lstm);
  EXPECT_EQ(p.phi3, before.phi3);
  EXPECT_NE(p.gnn, before.gnn);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  auto p = testing::small_network(6);
  const auto before = p;
  auto g = p.zeros_like();
  g.phi3.weight.data[0] = 123.0;
  g.phi3.weight.data[1] = -1e-3;
  train::Adam opt(p, 1e-3);
  opt.step(p, g, {});
  EXPECT_NEAR(p.phi3.weight.data[0] - before.phi3.weight.data[0], -1e-3, 1e-12);
  EXPECT_NEAR(p.phi3.weight.data[1] - before.phi3.weight.data[1], 1e-3, 1e-8);
  EXPECT_EQ(p.phi3.weight.data[2], before.phi3.weight.data[2]);
}

TEST(Config, Validation) {
  EXPECT_NO_THROW(TrainConfig::first_pass_defaults().validate());
  EXPECT_NO_THROW(TrainConfig::second_pass_defaults().validate());
  auto c = TrainConfig::first_pass_defaults();
  c.lambda = -1.0;
  EXPECT_THROW(c.validate(), UsageError);
  c = TrainConfig::first_pass_defaults();
  c.eta = -1e-3;
  EXPECT_THROW(c.validate(), UsageError);
  c = TrainConfig::first_pass_defaults();
  c.bptt_window = 0;
  EXPECT_THROW(c.validate(), UsageError);
  c = TrainConfig::first_pass_defaults();
  c.freeze = {"phi4"};
  EXPECT_THROW(c.validate(), UsageError);
  const auto s = TrainConfig::second_pass_defaults();
  EXPECT_EQ(s.freeze, (std::set<std::string>{"phi1", "phi2", "lstm", "phi3", "norm"}));
  EXPECT_EQ(s.learning_rate, 1e-4);
  EXPECT_EQ(s.epochs, 200);
  EXPECT_EQ(TrainConfig::first_pass_defaults().lambda, 1e-4);
}

TEST(FirstPass, ReducesLossAndRecordsHistory) {
  const auto r = train::train_first_pass(model::hh1952(), hh_dataset(), quick_config(8));
  ASSERT_EQ(r.report.history.size(), 9u);
  EXPECT_EQ(r.report.history.front().epoch, 0);
  EXPECT_LT(r.report.history.back().train.total, 0.5 * r.report.history.front().train.total);
  for (const auto& e : r.report.history) {
    EXPECT_NEAR(e.train.total, e.train.term1 + e.train.term2 + 1e-4 * e.train.reg, 1e-14);
    EXPECT_GT(e.val_total, 0.0);
  }
  EXPECT_EQ(r.params.provenance.pass, 1);
  EXPECT_EQ(r.params.provenance.seed, 5u);
  EXPECT_EQ(r.params.model_key, "hh1952");
  EXPECT_EQ(r.params.dt, 1.0);
}

TEST(FirstPass, DeterministicAcrossRunsAndThreadCounts) {
  auto c = quick_config(2);
  const auto a = train::train_first_pass(model::hh1952(), hh_dataset(), c);
  c.threads = 3;
  const auto b = train::train_first_pass(model::hh1952(), hh_dataset(), c);
  EXPECT_EQ(a.params, b.params);
  ASSERT_EQ(a.report.history.size(), b.report.history.size());
  for (std::size_t i = 0; i < a.report.history.size(); ++i) {
    EXPECT_EQ(a.report.history[i].train.total, b.report.history[i].train.total);
    EXPECT_EQ(a.report.history[i].val_total, b.report.history[i].val_total);
  }
}

TEST(FirstPass, ZeroEpochsReturnsInitialization) {
  const auto r = train::train_first_pass(model::hh1952(), hh_dataset(), quick_config(0));
  auto init = nn::init_network(model::hh1952(), 5);
  EXPECT_EQ(r.params.phi1, init.phi1);
  EXPECT_EQ(r.params.gnn, init.gnn);
  EXPECT_EQ(r.params.lstm, init.lstm);
  EXPECT_EQ(r.report.history.size(), 1u);
}

TEST(FirstPass, FrozenEverythingLeavesParametersUnchanged) {
  auto c = quick_config(1);
  c.freeze = {"phi1", "gnn", "phi2", "lstm", "phi3", "norm"};
  const auto a = train::train_first_pass(model::hh1952(), hh_dataset(), quick_config(0));
  const auto b = train::train_first_pass(model::hh1952(), hh_dataset(), c);
  auto pa = a.params, pb = b.params;
  EXPECT_EQ(pa.tensors().size(), pb.tensors().size());
  for (std::size_t i = 0; i < pa.tensors().size(); ++i) EXPECT_EQ(*pa.tensors()[i].tensor, *pb.tensors()[i].tensor);
}

TEST(FirstPass, DivergenceRaisesWithLastGoodParameters) {
  auto c = quick_config(20);
  c.learning_rate = 1e200;
  c.lambda = 1e300;
  int seen = -1;
  train::TrainCallbacks cb;
  cb.on_epoch = [&](const train::EpochRecord& e, const nn::NetworkParams&) { seen = e.epoch; };
  try {
    train::train_first_pass(model::hh1952(), hh_dataset(), c, cb);
    FAIL() << "expected divergence";
  } catch (const train::TrainingDivergedError& e) {
    EXPECT_GE(e.epoch(), 1);
    EXPECT_EQ(seen, e.epoch() - 1);
    for (const auto& ref : e.last_good().tensors())
      for (double w : ref.tensor->data) ASSERT_TRUE(std::isfinite(w));
  }
}

TEST(FirstPass, CallbackSeesEveryEpoch) {
  std::vector<int> epochs;
  train::TrainCallbacks cb;
  cb.on_epoch = [&](const train::EpochRecord& e, const nn::NetworkParams&) { epochs.push_back(e.epoch); };
  train::train_first_pass(model::hh1952(), hh_dataset(), quick_config(3), cb);
  EXPECT_EQ(epochs, (std::vector<int>{0, 1, 2, 3}));
}

class SecondPass : public ::testing::Test {
 protected:
  static const nn::NetworkParams& pass1() {
    static const auto p = train::train_first_pass(model::hh1952(), hh_dataset(), quick_config(3)).params;
    return p;
  }
  static TrainConfig config(int epochs, double eta) {
    auto c = TrainConfig::second_pass_defaults();
    c.epochs = epochs;
    c.eta = eta;
    c.warmup_steps = 20;
    c.learning_rate = 1e-3;
    return c;
  }
};

TEST_F(SecondPass, OnlyGnnChanges) {
  const auto r = train::train_second_pass(pass1(), hh_dataset(), config(2, 1e-3));
  EXPECT_EQ(r.params.phi1, pass1().phi1);
  EXPECT_EQ(r.params.phi2, pass1().phi2);
  EXPECT_EQ(r.params.lstm, pass1().lstm);
  EXPECT_EQ(r.params.phi3, pass1().phi3);
  EXPECT_EQ(r.params.norm, pass1().norm);
  EXPECT_NE(r.params.gnn, pass1().gnn);
  EXPECT_EQ(r.params.provenance.pass, 2);
  EXPECT_EQ(r.params.provenance.eta, 1e-3);
  EXPECT_EQ(r.report.kind, train::LossKind::kSecondPass);
}

TEST_F(SecondPass, StartsWithZeroDriftAndZeroEpochsIsIdentity) {
  const auto r = train::train_second_pass(pass1(), hh_dataset(), config(0, 2e-3));
  EXPECT_EQ(r.params.gnn, pass1().gnn);
  EXPECT_EQ(r.params.phi1, pass1().phi1);
  ASSERT_EQ(r.report.history.size(), 1u);
  EXPECT_EQ(r.report.history[0].train.term2, 0.0);
}

TEST_F(SecondPass, ReadsOnlyObservableColumns) {
  auto ds = hh_dataset();
  for (auto& seg : ds.segments) {
    sim::Trajectory only_v("hh1952", {"V"}, seg.dt(), seg.t0(), seg.cycle_length());
    for (std::size_t i = 0; i < seg.samples(); ++i) only_v.push_back(std::vector<double>{seg.at(i, 0)});
    seg = only_v;
  }
  const auto a = train::train_second_pass(pass1(), ds, config(1, 1e-3));
  const auto b = train::train_second_pass(pass1(), hh_dataset(), config(1, 1e-3));
  EXPECT_EQ(a.params, b.params);
}

TEST_F(SecondPass, LargerEtaDriftsLess) {
  const auto lo = train::train_second_pass(pass1(), hh_dataset(), config(3, 0.0));
  const auto hi = train::train_second_pass(pass1(), hh_dataset(), config(3, 1.0));
  EXPECT_LT(hi.report.final.term2, lo.report.final.term2);
}

TEST(OneStepRmse, PerGateAndBounded) {
  const auto p = train::train_first_pass(model::hh1952(), hh_dataset(), quick_config(0)).params;
  const auto r = train::one_step_gate_rmse(p, hh_dataset(), hh_dataset().validation_indices);
  ASSERT_EQ(r.size(), 3u);
  for (double x : r) {
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
}

}  // namespace
}  // namespace gatenet
