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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "gatenet/error.hpp"
#include "gatenet/model/models.hpp"
#include "gatenet/nn/checkpoint.hpp"
#include "run_config.hpp"
#include "svg.hpp"

namespace gatenet {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out, err;
};

Result gatenet_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gatenet");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() / "gatenet_cli_test";
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  std::string at(const std::string& name) const { return (root_ / name).string(); }
  // Small HH dataset shared by the training tests.
  std::string dataset() {
    const auto r = gatenet_cli({"simulate", "--model", "hh1952", "--cl-min", "20", "--cl-max", "40",
                                "--cl-step", "5", "--duration", "300", "--discard", "100", "-o",
                                at("ds")});
    EXPECT_EQ(r.code, 0) << r.err;
    return at("ds");
  }
  fs::path root_;
};

TEST_F(CliTest, SimulateWritesSegmentsManifestAndConfig) {
  const auto ds = dataset();
  EXPECT_TRUE(fs::exists(fs::path(ds) / "manifest.json"));
  EXPECT_TRUE(fs::exists(fs::path(ds) / "run_config.json"));
  std::size_t csv = 0;
  for (const auto& e : fs::directory_iterator(ds)) csv += e.path().extension() == ".csv";
  EXPECT_EQ(csv, 5u);
  const auto cfg = cli::load_run_config(fs::path(ds) / "run_config.json", "simulate");
  EXPECT_EQ(cfg.model, "hh1952");
  EXPECT_EQ(cfg.cl_max, 40.0);
}

TEST_F(CliTest, ScenarioSelectsPerturbedModel) {
  const auto a = gatenet_cli({"currents", "--scenario", "long_qt", "--eval-cl", "1000",
                              "--eval-duration", "1000", "--eval-pacing", "0", "-o", at("lq")});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto b = gatenet_cli({"currents", "--eval-cl", "1000", "--eval-duration", "1000",
                              "--eval-pacing", "0", "-o", at("ctl")});
  ASSERT_EQ(b.code, 0) << b.err;
  const auto ma = nlohmann::json::parse(slurp(root_ / "lq" / "metrics.json"));
  const auto mb = nlohmann::json::parse(slurp(root_ / "ctl" / "metrics.json"));
  EXPECT_GT(ma["apd90"].get<double>(), mb["apd90"].get<double>());
  EXPECT_TRUE(fs::exists(root_ / "lq" / "vm.svg"));
  EXPECT_TRUE(fs::exists(root_ / "lq" / "currents" / "I_Kr.svg"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(gatenet_cli({"simulate", "--cl-min", "800", "--cl-max", "300", "-o", at("x")}).code,
            cli::kExitUsage);
  EXPECT_EQ(gatenet_cli({"simulate", "--no-such-flag"}).code, cli::kExitUsage);
  EXPECT_EQ(gatenet_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(gatenet_cli({"--help"}).code, cli::kExitOk);
  EXPECT_EQ(gatenet_cli({"train", "--dataset", at("missing"), "-o", at("t")}).code, cli::kExitData);
  const auto r = gatenet_cli({"retrain", "--dataset", at("missing"), "-o", at("t")});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("--checkpoint"), std::string::npos);
  EXPECT_EQ(gatenet_cli({"retrain", "--checkpoint", at("none.json"), "-o", at("t")}).code,
            cli::kExitData);
  EXPECT_EQ(gatenet_cli({"simulate", "--scenario", "ito", "--model", "hh1952", "-o", at("x")}).code,
            cli::kExitUsage);
}

TEST_F(CliTest, DivergenceExitsWithNumericalCode) {
  const auto ds = dataset();
  const auto r = gatenet_cli({"train", "--model", "hh1952", "--dataset", ds, "--epochs", "5", "--lr",
                              "1e200", "--lambda", "1e300", "-o", at("div")});
  EXPECT_EQ(r.code, cli::kExitNumerical) << r.err;
  EXPECT_TRUE(fs::exists(root_ / "div" / "checkpoint_last_good.json"));
}

TEST_F(CliTest, ZeroEpochTrainingSavesInitialization) {
  const auto ds = dataset();
  const auto r = gatenet_cli({"train", "--model", "hh1952", "--dataset", ds, "--epochs", "0",
                              "--seed", "7", "-o", at("t0")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto p = nn::load_checkpoint(root_ / "t0" / "checkpoint.json");
  const auto init = nn::init_network(model::hh1952(), 7);
  EXPECT_EQ(p.phi1, init.phi1);
  EXPECT_EQ(p.gnn, init.gnn);
  EXPECT_EQ(p.phi2, init.phi2);
  EXPECT_EQ(p.lstm, init.lstm);
  EXPECT_EQ(p.phi3, init.phi3);
  EXPECT_TRUE(fs::exists(root_ / "t0" / "checkpoints" / "epoch_0000.json"));
  const auto log = slurp(root_ / "t0" / "loss_log.csv");
  EXPECT_EQ(log.substr(0, log.find('\n')), "epoch,n1_or_data,n2_or_drift,reg,total,val_total");
}

TEST_F(CliTest, TrainRetrainAndSweep) {
  const auto ds = dataset();
  ASSERT_EQ(gatenet_cli({"train", "--model", "hh1952", "--dataset", ds, "--epochs", "2", "-o",
                         at("p1")}).code, 0);
  for (int e = 0; e <= 2; ++e) {
    EXPECT_TRUE(fs::exists(root_ / "p1" / "checkpoints" / ("epoch_000" + std::to_string(e) + ".json")));
  }
  const auto report = nlohmann::json::parse(slurp(root_ / "p1" / "report.json"));
  EXPECT_EQ(report["validation_gate_rmse"].size(), 3u);

  const auto ckpt = at("p1/checkpoint.json");
  const auto r = gatenet_cli({"retrain", "--model", "hh1952", "--dataset", ds, "--checkpoint", ckpt,
                              "--eta", "1e-3", "--epochs", "1", "--warmup", "10", "-o", at("p2")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto p2 = nn::load_checkpoint(root_ / "p2" / "checkpoint.json");
  EXPECT_EQ(p2.provenance.pass, 2);
  EXPECT_EQ(p2.provenance.eta, 1e-3);

  const auto s = gatenet_cli({"sweep-eta", "--model", "hh1952", "--dataset", ds, "--checkpoint", ckpt,
                              "--etas", "1e-4", "5e-4", "1e-3", "2e-3", "--epochs", "1", "--warmup",
                              "10", "-o", at("sw")});
  ASSERT_EQ(s.code, 0) << s.err;
  std::ifstream is(root_ / "sw" / "sweep_summary.csv");
  std::string line;
  int rows = -1;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 4);
  EXPECT_TRUE(fs::exists(root_ / "sw" / "eta_0.002" / "checkpoint.json"));
}

TEST_F(CliTest, RerunFromEmittedConfigIsBitExact) {
  const auto ds = dataset();
  ASSERT_EQ(gatenet_cli({"train", "--model", "hh1952", "--dataset", ds, "--epochs", "2", "-o",
                         at("a")}).code, 0);
  ASSERT_EQ(gatenet_cli({"train", "--config", at("a/run_config.json"), "-o", at("b")}).code, 0);
  for (const char* f : {"checkpoint.json", "loss_log.csv", "report.json", "loss.svg"}) {
    EXPECT_EQ(slurp(root_ / "a" / f), slurp(root_ / "b" / f)) << f;
  }
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  nlohmann::json j = {{"model", "hh1952"}, {"seed", 9}, {"train", {{"epochs", 7}}}};
  std::ofstream(root_ / "c.json") << j.dump();
  auto c = cli::load_run_config(root_ / "c.json", "train");
  EXPECT_EQ(c.model, "hh1952");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.train.epochs, 7);
  EXPECT_EQ(c.train.lambda, 1e-4);
  // Retraining defaults apply underneath a partial file.
  c = cli::load_run_config(root_ / "c.json", "retrain");
  EXPECT_EQ(c.train.learning_rate, 1e-4);
  EXPECT_TRUE(c.train.frozen("lstm"));

  std::ofstream(root_ / "bad.json") << R"({"modle": "hh1952"})";
  EXPECT_THROW(cli::load_run_config(root_ / "bad.json", "train"), UsageError);
  const auto r = gatenet_cli({"simulate", "--config", at("bad.json")});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("modle"), std::string::npos);
}

TEST_F(CliTest, RunConfigJsonRoundTrip) {
  auto c = cli::default_config("sweep-eta");
  c.etas = {1.0 / 3.0, 2e-3};
  c.cl_step = 0.1;
  c.output = "/x/y";
  c.train.freeze = {"phi1", "norm"};
  cli::RunConfig back = cli::default_config("sweep-eta");
  cli::merge_json(back, cli::to_json(c));
  EXPECT_EQ(cli::to_json(back), cli::to_json(c));
  EXPECT_EQ(back.etas[0], 1.0 / 3.0);
}

TEST_F(CliTest, OutputRootFromEnvironment) {
  const auto env_root = root_ / "envroot";
  ::setenv(cli::kOutputRootEnv, env_root.c_str(), 1);
  const auto r = gatenet_cli({"currents", "--model", "hh1952", "--eval-cl", "50", "--eval-duration",
                              "200", "--eval-pacing", "0"});
  ::unsetenv(cli::kOutputRootEnv);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(env_root / "currents" / "run_config.json"));
  EXPECT_TRUE(fs::exists(env_root / "currents" / "currents.csv"));
}

TEST(Svg, LinePlotStructure) {
  const auto svg = cli::line_plot_svg({"V", "t (ms)", "mV"},
                                      {{"a", {0, 1, 2}, {0, 1, 0}}, {"b<c", {0, 2}, {-1, 1}}});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  std::size_t n = 0;
  for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++n;
  EXPECT_EQ(n, 2u);
  EXPECT_NE(svg.find("b&lt;c"), std::string::npos);
  EXPECT_NE(cli::line_plot_svg({"empty", "", ""}, {}).find("</svg>"), std::string::npos);
}

}  // namespace
}  // namespace gatenet
