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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gatenet/error.hpp"
#include "gatenet/model/models.hpp"
#include "gatenet/nn/layers.hpp"
#include "gatenet/nn/network.hpp"
#include "gatenet/ode/metrics.hpp"
#include "gatenet/ode/neural_ode.hpp"
#include "gatenet/sim/integrators.hpp"
#include "test_util.hpp"

namespace gatenet {
namespace {

namespace fs = std::filesystem;

// Untrained but fully specified network for `mdl`, normalized on a short
// paced simulation.
nn::NetworkParams network_for(const model::IonicModel& mdl, std::uint64_t seed) {
  auto p = nn::init_network(mdl, seed);
  const auto tr = sim::simulate(mdl, sim::default_protocol(mdl.key(), mdl.key() == "hh1952" ? 50.0 : 500.0, 1000.0), {});
  const sim::Trajectory* segs[] = {&tr};
  p.norm = nn::compute_normalization(mdl, segs);
  nn::Rng rng(seed + 100);
  for (auto* t : {&p.gnn.w_inf, &p.gnn.w_tau})
    for (double& w : t->data) w += rng.uniform(-1.0, 1.0);
  return p;
}

TEST(RhoToTau, Examples) {
  const auto tau = ode::rho_to_tau(std::vector<double>{std::exp(-1.0), std::exp(-2.0)}, 1.0);
  EXPECT_NEAR(tau[0], 1.0, 1e-15);
  EXPECT_NEAR(tau[1], 0.5, 1e-15);
  for (double t : {0.1, 1.0, 100.0}) {
    EXPECT_NEAR(ode::rho_to_tau(std::vector<double>{std::exp(-1.0 / t)}, 1.0)[0], t, 1e-9 * t);
  }
}

TEST(RhoToTau, AlwaysPositiveAfterClamp) {
  const auto tau = ode::rho_to_tau(std::vector<double>{0.0, 1e-300, 0.5, 1.0 - 1e-17, 1.0}, 1.0);
  for (double t : tau) {
    EXPECT_GT(t, 0.0);
    EXPECT_TRUE(std::isfinite(t));
  }
  EXPECT_NEAR(tau[0], -1.0 / std::log(1e-6), 1e-15);
  EXPECT_NEAR(tau[4], -1.0 / std::log1p(-1e-6), 1e-3);
}

TEST(NeuralOde, RejectsMismatchedHost) {
  EXPECT_THROW(ode::NeuralOde(network_for(model::hh1952(), 1), model::tnnp2004()), DataError);
}

TEST(NeuralOde, DerivativeFixedPointAndSign) {
  const auto mdl = model::tnnp2004();
  const ode::NeuralOde node(network_for(mdl, 2), mdl);
  auto u = mdl.initial_state();
  const std::size_t n = node.gate_indices().size();
  ASSERT_EQ(n, 10u);
  std::vector<double> h_inf(n), tau(n);
  node.kinetics(u, h_inf, tau);
  for (std::size_t k = 0; k < n; ++k) {
    EXPECT_GT(tau[k], 0.0);
    u[node.gate_indices()[k]] = h_inf[k];
  }
  for (double d : ode::neural_gate_derivative(u, node)) EXPECT_EQ(d, 0.0);
  for (std::size_t k = 0; k < n; ++k) u[node.gate_indices()[k]] = k % 2 ? 0.0 : 1.0;
  const auto d = ode::neural_gate_derivative(u, node);
  for (std::size_t k = 0; k < n; ++k) {
    if (k % 2) EXPECT_EQ(d[k] > 0.0, h_inf[k] > 0.0);
    else EXPECT_EQ(d[k] < 0.0, h_inf[k] < 1.0);
  }
}

// One exponential step at the training dt reproduces the GNN update.
TEST(NeuralOde, HybridStepMatchesGnnStep) {
  for (const auto& mdl : {model::hh1952(), model::tnnp2004()}) {
    const auto params = network_for(mdl, 3);
    const ode::NeuralOde node(params, mdl);
    nn::Rng rng(9);
    const sim::PacingProtocol quiet{1000.0, 0.0, 1.0, 1000.0};
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      auto u = mdl.initial_state();
      u[0] = rng.uniform(-90.0, 40.0);
      for (auto g : node.gate_indices()) u[g] = rng.uniform(0.0, 1.0);
      // GNN: x = phi1(v), h <- rho h + (1 - rho) h_inf.
      const auto& obs = params.partition.observables;
      std::vector<double> v(obs.size()), vn(obs.size());
      for (std::size_t k = 0; k < obs.size(); ++k) v[k] = u[obs[k]];
      nn::normalize_observables(params, v, vn);
      std::vector<double> h(node.gate_indices().size());
      for (std::size_t k = 0; k < h.size(); ++k) h[k] = u[node.gate_indices()[k]];
      nn::forward_gates(params, vn, h);

      ode::hybrid_step(node, quiet, 500.0, params.dt, u);
      for (std::size_t k = 0; k < h.size(); ++k) worst = std::max(worst, std::abs(u[node.gate_indices()[k]] - h[k]));
    }
    EXPECT_LT(worst, 1e-10) << mdl.key();
  }
}

TEST(NeuralOde, ZeroDurationIsEmpty) {
  const auto mdl = model::hh1952();
  const ode::NeuralOde node(network_for(mdl, 4), mdl);
  const auto p = sim::default_protocol("hh1952", 50.0, 50.0);
  EXPECT_TRUE(ode::integrate_neural_ode(node, p, 0.0, {}, mdl.initial_state()).empty());
  const auto tr = ode::integrate_neural_ode(node, p, 20.0, {}, mdl.initial_state());
  EXPECT_EQ(tr.samples(), 20u);
  EXPECT_EQ(tr.names(), mdl.layout().names());
  EXPECT_EQ(std::vector<double>(tr.row(0).begin(), tr.row(0).end()), mdl.initial_state());
}

TEST(NeuralOde, PacedInitialStateCoversWholeBeats) {
  const auto mdl = model::hh1952();
  const auto p = sim::default_protocol("hh1952", 30.0, 30.0);
  const auto a = ode::paced_initial_state(mdl, p, 100.0);
  auto q = p;
  q.total_duration = 120.0;  // ceil(100 / 30) beats
  EXPECT_EQ(a, sim::paced_state(mdl, q));
}

TEST(ApMetrics, SquarePulse) {
  std::vector<double> t, v;
  for (int beat = 0; beat < 4; ++beat)
    for (int i = 0; i < 1000; ++i) {
      t.push_back(beat * 1000.0 + i);
      v.push_back(i >= 10 && i < 210 ? 15.0 : -85.0);
    }
  const auto m = ode::ap_metrics(t, v);
  EXPECT_GE(m.apd90, 180.0);
  EXPECT_LE(m.apd90, 200.0);
  EXPECT_EQ(m.peak_vm, 15.0);
  EXPECT_EQ(m.resting_vm, -85.0);
  EXPECT_EQ(m.averaged.size(), 3u);
}

TEST(ApMetrics, FlatTraceHasNoBeat) {
  std::vector<double> t(500), v(500, -85.0);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
  try {
    ode::ap_metrics(t, v);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("no beat detected"), std::string::npos);
  }
}

TEST(ApMetrics, TnnpAtOneSecondIsPhysiologic) {
  const auto mdl = model::tnnp2004();
  const auto p = sim::default_protocol("tnnp2004", 1000.0, 6000.0);
  const auto tr = sim::simulate(mdl, p, {0.02, 1.0, 2000.0});
  const auto m = ode::ap_metrics(tr);
  EXPECT_GE(m.apd90, 250.0);
  EXPECT_LE(m.apd90, 360.0);
  EXPECT_GT(m.peak_vm, 0.0);
  EXPECT_LT(m.resting_vm, -80.0);
  EXPECT_GT(m.ca_amplitude, 1e-4);
}

TEST(Currents, ReconstructionMatchesModelAndCsv) {
  const auto mdl = model::tnnp2004();
  const auto p = sim::default_protocol("tnnp2004", 600.0, 1200.0);
  const auto tr = sim::simulate(mdl, p, {});
  const auto cs = ode::reconstruct_currents(mdl, tr);
  EXPECT_EQ(cs.names, mdl.current_names());
  ASSERT_EQ(cs.t.size(), tr.samples());
  for (std::size_t i = 0; i < tr.samples(); i += 97) {
    const auto ref = mdl.current_map(tr.row(i));
    for (std::size_t c = 0; c < cs.names.size(); ++c) EXPECT_EQ(cs.values[c][i], ref.at(cs.names[c]));
  }
  const auto m = ode::ap_metrics(tr);
  const auto na = ode::beat_current_stats(cs, "I_Na", m);
  EXPECT_LT(na.peak, -100.0);  // inward sodium spike
  EXPECT_GT(ode::beat_current_stats(cs, "I_Kr", m).integral, 0.0);

  const auto dir = fs::temp_directory_path() / "gatenet_test_currents";
  fs::create_directories(dir);
  ode::write_currents_csv(dir / "c.csv", cs);
  std::ifstream is(dir / "c.csv");
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header.rfind("t,I_Na,", 0), 0u) << header;
}

TEST(Currents, SubstitutedGatesStartFromRecordedGates) {
  const auto mdl = model::hh1952();
  const auto params = network_for(mdl, 5);
  const auto tr = sim::simulate(mdl, sim::default_protocol("hh1952", 50.0, 100.0), {});
  const auto sub = ode::substitute_network_gates(params, tr);
  ASSERT_EQ(sub.samples(), tr.samples());
  EXPECT_EQ(std::vector<double>(sub.row(0).begin(), sub.row(0).end()),
            std::vector<double>(tr.row(0).begin(), tr.row(0).end()));
  for (std::size_t i = 0; i < tr.samples(); ++i) {
    EXPECT_EQ(sub.at(i, 0), tr.at(i, 0));  // voltage is untouched
    for (std::size_t g = 1; g < 4; ++g) {
      EXPECT_GE(sub.at(i, g), 0.0);
      EXPECT_LE(sub.at(i, g), 1.0);
    }
  }
}

}  // namespace
}  // namespace gatenet
