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

#include "gatenet/nn/checkpoint.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gatenet/error.hpp"
#include "json.hpp"

namespace gatenet::nn {

using nlohmann::json;

namespace {

json tensor_json(const Tensor& t) {
  return json{{"rows", t.rows}, {"cols", t.cols}, {"data", t.data}};
}

Tensor tensor_from(const json& j, const std::string& name) {
  Tensor t;
  t.rows = j.at("rows").get<std::size_t>();
  t.cols = j.at("cols").get<std::size_t>();
  t.data = j.at("data").get<std::vector<double>>();
  if (t.data.size() != t.rows * t.cols) {
    throw DataError("checkpoint tensor " + name + " has " + std::to_string(t.data.size()) +
                    " values, declared " + std::to_string(t.rows) + "x" + std::to_string(t.cols));
  }
  return t;
}

}  // namespace

std::string checkpoint_to_string(const NetworkParams& p) {
  json j;
  j["format"] = "gatenet-checkpoint";
  j["version"] = kCheckpointVersion;
  j["model_key"] = p.model_key;
  j["variable_names"] = p.variable_names;
  j["partition"] = {{"observables", p.partition.observables},
                    {"gnn_gates", p.partition.gnn_gates},
                    {"lstm_vars", p.partition.lstm_vars}};
  j["shape"] = {{"observables", p.shape.observables}, {"gates", p.shape.gates},
                {"others", p.shape.others},           {"width", p.shape.width},
                {"lstm_width", p.shape.lstm_width},   {"phi1_layers", p.shape.phi1_layers}};
  j["dt"] = p.dt;
  j["provenance"] = {{"seed", p.provenance.seed}, {"lambda", p.provenance.lambda},
                     {"eta", p.provenance.eta},   {"pass", p.provenance.pass}};
  j["norm"] = {{"obs_shift", p.norm.obs_shift}, {"obs_scale", p.norm.obs_scale},
               {"other_shift", p.norm.other_shift}, {"other_scale", p.norm.other_scale}};
  json acts = json::object();
  for (std::size_t l = 0; l < p.phi1.size(); ++l) {
    acts["phi1." + std::to_string(l)] = activation_name(p.phi1[l].activation);
  }
  acts["phi2"] = activation_name(p.phi2.activation);
  acts["phi3"] = activation_name(p.phi3.activation);
  j["activations"] = acts;
  json tensors = json::object();
  for (const auto& ref : p.tensors()) {
    for (double x : ref.tensor->data) {
      if (!std::isfinite(x)) throw NumericalError("non-finite value in tensor " + ref.name);
    }
    tensors[ref.name] = tensor_json(*ref.tensor);
  }
  j["tensors"] = tensors;
  return j.dump(1);
}

NetworkParams checkpoint_from_string(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "gatenet-checkpoint") throw DataError("not a gatenet checkpoint");
    if (j.at("version").get<int>() != kCheckpointVersion) {
      throw DataError("unsupported checkpoint version " + j.at("version").dump());
    }
    NetworkShape shape;
    const auto& s = j.at("shape");
    shape.observables = s.at("observables").get<std::size_t>();
    shape.gates = s.at("gates").get<std::size_t>();
    shape.others = s.at("others").get<std::size_t>();
    shape.width = s.at("width").get<std::size_t>();
    shape.lstm_width = s.at("lstm_width").get<std::size_t>();
    shape.phi1_layers = s.at("phi1_layers").get<std::size_t>();

    NetworkParams p = init_network(shape, 0);
    p.model_key = j.at("model_key").get<std::string>();
    p.variable_names = j.at("variable_names").get<std::vector<std::string>>();
    const auto& part = j.at("partition");
    p.partition.observables = part.at("observables").get<std::vector<std::size_t>>();
    p.partition.gnn_gates = part.at("gnn_gates").get<std::vector<std::size_t>>();
    p.partition.lstm_vars = part.at("lstm_vars").get<std::vector<std::size_t>>();
    p.dt = j.at("dt").get<double>();
    const auto& prov = j.at("provenance");
    p.provenance.seed = prov.at("seed").get<std::uint64_t>();
    p.provenance.lambda = prov.at("lambda").get<double>();
    p.provenance.eta = prov.at("eta").get<double>();
    p.provenance.pass = prov.at("pass").get<int>();
    const auto& n = j.at("norm");
    p.norm.obs_shift = n.at("obs_shift").get<std::vector<double>>();
    p.norm.obs_scale = n.at("obs_scale").get<std::vector<double>>();
    p.norm.other_shift = n.at("other_shift").get<std::vector<double>>();
    p.norm.other_scale = n.at("other_scale").get<std::vector<double>>();
    if (p.norm.obs_shift.size() != shape.observables || p.norm.obs_scale.size() != shape.observables ||
        p.norm.other_shift.size() != shape.others || p.norm.other_scale.size() != shape.others) {
      throw DataError("checkpoint normalization does not match the declared shape");
    }
    if (const auto it = j.find("activations"); it != j.end()) {
      for (std::size_t l = 0; l < p.phi1.size(); ++l) {
        p.phi1[l].activation = parse_activation(it->at("phi1." + std::to_string(l)).get<std::string>());
      }
      p.phi2.activation = parse_activation(it->at("phi2").get<std::string>());
      p.phi3.activation = parse_activation(it->at("phi3").get<std::string>());
    }
    const auto& tensors = j.at("tensors");
    for (auto& ref : p.tensors()) {
      if (!tensors.contains(ref.name)) throw DataError("checkpoint is missing tensor " + ref.name);
      Tensor t = tensor_from(tensors.at(ref.name), ref.name);
      if (t.rows != ref.tensor->rows || t.cols != ref.tensor->cols) {
        throw DataError("checkpoint tensor " + ref.name + " has the wrong shape");
      }
      *ref.tensor = std::move(t);
    }
    return p;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const NetworkParams& params) {
  const std::string text = checkpoint_to_string(params);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write checkpoint " + path.string());
  os << text;
  if (!os) throw DataError("cannot write checkpoint " + path.string());
}

NetworkParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("checkpoint not found: " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  try {
    return checkpoint_from_string(ss.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void check_compatible(const NetworkParams& params, const model::IonicModel& model) {
  auto fail = [&](const std::string& why) {
    throw DataError("checkpoint/model mismatch: " + why);
  };
  if (params.model_key != model.key()) {
    fail("checkpoint is for '" + params.model_key + "', model is '" + model.key() + "'");
  }
  if (params.variable_names != model.layout().names()) fail("state layout differs");
  const auto& part = model.partition();
  if (params.partition.observables != part.observables || params.partition.gnn_gates != part.gnn_gates ||
      params.partition.lstm_vars != part.lstm_vars) {
    fail("state partition differs");
  }
}

}  // namespace gatenet::nn
