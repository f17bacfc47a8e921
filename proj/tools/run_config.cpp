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

#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "gatenet/error.hpp"
#include "gatenet/model/models.hpp"

namespace gatenet::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kCommands{"simulate", "train",    "retrain", "sweep-eta",
                                      "export-ode", "evaluate", "currents"};

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void take_path(const json& j, const char* key, std::filesystem::path& out) {
  if (j.contains(key)) out = j.at(key).get<std::string>();
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw UsageError(where + " must be a JSON object");
  for (const auto& [k, _] : j.items()) {
    if (!allowed.count(k)) throw UsageError("unknown config key " + where + "." + k);
  }
}

}  // namespace

void RunConfig::validate() const {
  if (!kCommands.count(command)) throw UsageError("unknown command " + command);
  const auto keys = model::model_keys();
  if (std::find(keys.begin(), keys.end(), model) == keys.end()) {
    throw UsageError("unknown model " + model);
  }
  model::parse_tnnp_variant(variant);
  model::parse_scenario(scenario);
  if (model != "tnnp2004" && scenario != "control") {
    throw UsageError("scenarios are defined for tnnp2004 only");
  }
  if (!(cl_step > 0.0)) throw UsageError("cycle-length step must be positive");
  if (cl_min > cl_max) throw UsageError("cycle-length range: min exceeds max");
  if (!(cl_min > 0.0)) throw UsageError("cycle lengths must be positive");
  if (!(dt_inner > 0.0) || !(dt > 0.0)) throw UsageError("time steps must be positive");
  if (!(discard >= 0.0) || !(duration > discard)) {
    throw UsageError("duration must exceed the discarded transient");
  }
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw UsageError("train fraction must lie in (0, 1]");
  }
  if (!(eval_cycle_length > 0.0) || !(eval_duration >= 0.0) || !(eval_pacing >= 0.0)) {
    throw UsageError("evaluation settings must be non-negative");
  }
  if (eval_beats == 0) throw UsageError("at least one beat must be averaged");
  for (double e : etas) {
    if (!(e >= 0.0)) throw UsageError("eta values must be non-negative");
  }
  if (command == "sweep-eta" && etas.empty()) throw UsageError("sweep-eta needs at least one eta");
  train.validate();
}

sim::DatasetOptions RunConfig::dataset_options() const {
  sim::DatasetOptions o;
  o.cycle_lengths = sim::cycle_length_range(cl_min, cl_max, cl_step);
  o.duration = duration;
  o.discard = discard;
  o.dt_inner = dt_inner;
  o.dt_out = dt;
  o.seed = seed;
  o.train_fraction = train_fraction;
  o.threads = threads;
  return o;
}

RunConfig default_config(const std::string& command) {
  RunConfig c;
  c.command = command;
  c.train = (command == "retrain" || command == "sweep-eta")
                ? train::TrainConfig::second_pass_defaults()
                : train::TrainConfig::first_pass_defaults();
  return c;
}

json to_json(const RunConfig& c) {
  json t;
  t["lambda"] = c.train.lambda;
  t["eta"] = c.train.eta;
  t["learning_rate"] = c.train.learning_rate;
  t["beta1"] = c.train.beta1;
  t["beta2"] = c.train.beta2;
  t["epsilon"] = c.train.epsilon;
  t["epochs"] = c.train.epochs;
  t["bptt_window"] = c.train.bptt_window;
  t["warmup_steps"] = c.train.warmup_steps;
  t["freeze"] = std::vector<std::string>(c.train.freeze.begin(), c.train.freeze.end());

  json j;
  j["command"] = c.command;
  j["model"] = c.model;
  j["variant"] = c.variant;
  j["scenario"] = c.scenario;
  j["cycle_lengths"] = {{"min", c.cl_min}, {"max", c.cl_max}, {"step", c.cl_step}};
  j["duration"] = c.duration;
  j["discard"] = c.discard;
  j["dt_inner"] = c.dt_inner;
  j["dt"] = c.dt;
  j["train_fraction"] = c.train_fraction;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["train"] = t;
  j["etas"] = c.etas;
  j["eval"] = {{"cycle_length", c.eval_cycle_length},
               {"duration", c.eval_duration},
               {"pacing", c.eval_pacing},
               {"beats", c.eval_beats}};
  j["output"] = c.output.string();
  j["dataset"] = c.dataset.string();
  j["checkpoint"] = c.checkpoint.string();
  j["control"] = c.control.string();
  j["perturbed"] = c.perturbed.string();
  return j;
}

void merge_json(RunConfig& c, const json& j) {
  try {
    check_keys(j,
               {"command", "model", "variant", "scenario", "cycle_lengths", "duration", "discard",
                "dt_inner", "dt", "train_fraction", "seed", "threads", "train", "etas", "eval",
                "output", "dataset", "checkpoint", "control", "perturbed"},
               "config");
    take(j, "model", c.model);
    take(j, "variant", c.variant);
    take(j, "scenario", c.scenario);
    if (j.contains("cycle_lengths")) {
      const auto& r = j.at("cycle_lengths");
      check_keys(r, {"min", "max", "step"}, "cycle_lengths");
      take(r, "min", c.cl_min);
      take(r, "max", c.cl_max);
      take(r, "step", c.cl_step);
    }
    take(j, "duration", c.duration);
    take(j, "discard", c.discard);
    take(j, "dt_inner", c.dt_inner);
    take(j, "dt", c.dt);
    take(j, "train_fraction", c.train_fraction);
    take(j, "seed", c.seed);
    take(j, "threads", c.threads);
    if (j.contains("train")) {
      const auto& t = j.at("train");
      check_keys(t,
                 {"lambda", "eta", "learning_rate", "beta1", "beta2", "epsilon", "epochs",
                  "bptt_window", "warmup_steps", "freeze"},
                 "train");
      take(t, "lambda", c.train.lambda);
      take(t, "eta", c.train.eta);
      take(t, "learning_rate", c.train.learning_rate);
      take(t, "beta1", c.train.beta1);
      take(t, "beta2", c.train.beta2);
      take(t, "epsilon", c.train.epsilon);
      take(t, "epochs", c.train.epochs);
      take(t, "bptt_window", c.train.bptt_window);
      take(t, "warmup_steps", c.train.warmup_steps);
      if (t.contains("freeze")) {
        const auto v = t.at("freeze").get<std::vector<std::string>>();
        c.train.freeze = {v.begin(), v.end()};
      }
    }
    take(j, "etas", c.etas);
    if (j.contains("eval")) {
      const auto& e = j.at("eval");
      check_keys(e, {"cycle_length", "duration", "pacing", "beats"}, "eval");
      take(e, "cycle_length", c.eval_cycle_length);
      take(e, "duration", c.eval_duration);
      take(e, "pacing", c.eval_pacing);
      take(e, "beats", c.eval_beats);
    }
    take_path(j, "output", c.output);
    take_path(j, "dataset", c.dataset);
    take_path(j, "checkpoint", c.checkpoint);
    take_path(j, "control", c.control);
    take_path(j, "perturbed", c.perturbed);
  } catch (const json::exception& e) {
    throw UsageError(std::string("invalid config: ") + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path, const std::string& command) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
  if (j.contains("command") && j.at("command") != command) {
    throw UsageError(path.string() + " was written by '" + j.at("command").get<std::string>() +
                     "', not '" + command + "'");
  }
  RunConfig c = default_config(command);
  merge_json(c, j);
  return c;
}

void save_run_config(const std::filesystem::path& path, const RunConfig& cfg) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path.string());
  os << to_json(cfg).dump(2) << '\n';
  if (!os) throw DataError("error writing " + path.string());
}

}  // namespace gatenet::cli
