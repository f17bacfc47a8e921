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

#include "gatenet/model/ionic_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "gatenet/error.hpp"

namespace gatenet::model {

std::string_view kind_name(VariableKind kind) {
  switch (kind) {
    case VariableKind::kVoltage: return "voltage";
    case VariableKind::kConcentration: return "concentration";
    case VariableKind::kClassicGate: return "classic_gate";
    case VariableKind::kAtypicalGate: return "atypical_gate";
  }
  return "unknown";
}

StateLayout::StateLayout(std::vector<std::string> names,
                         std::vector<VariableKind> kinds)
    : names_(std::move(names)), kinds_(std::move(kinds)) {
  if (names_.size() != kinds_.size()) {
    throw UsageError("state layout: names and kinds differ in length");
  }
  if (names_.size() > kMaxStateSize) throw UsageError("state layout: too many variables");
  std::set<std::string> seen;
  std::size_t voltages = 0;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!seen.insert(names_[i]).second) {
      throw UsageError("state layout: duplicate variable " + names_[i]);
    }
    if (kinds_[i] == VariableKind::kVoltage) {
      voltage_ = i;
      ++voltages;
    }
  }
  if (voltages != 1) throw UsageError("state layout: exactly one voltage variable required");
}

std::size_t StateLayout::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  throw UsageError("unknown state variable " + std::string(name));
}

bool StateLayout::contains(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::vector<std::size_t> StatePartition::observable_slots() const {
  std::vector<std::size_t> slots;
  for (std::size_t o : observables) {
    auto it = std::find(lstm_vars.begin(), lstm_vars.end(), o);
    if (it == lstm_vars.end()) throw UsageError("observable is not an LSTM variable");
    slots.push_back(static_cast<std::size_t>(it - lstm_vars.begin()));
  }
  return slots;
}

void StatePartition::validate(const StateLayout& layout) const {
  const std::size_t k = layout.size();
  std::vector<int> owner(k, 0);
  for (std::size_t g : gnn_gates) {
    if (g >= k) throw UsageError("partition: gate index out of range");
    if (layout.kind(g) != VariableKind::kClassicGate) {
      throw UsageError("partition: " + layout.name(g) + " is not a classic gate");
    }
    ++owner[g];
  }
  for (std::size_t v : lstm_vars) {
    if (v >= k) throw UsageError("partition: index out of range");
    ++owner[v];
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (owner[i] != 1) {
      throw UsageError("partition: " + layout.name(i) +
                       " must belong to exactly one of gnn_gates / lstm_vars");
    }
  }
  if (observables.empty()) throw UsageError("partition: no observables");
  for (std::size_t o : observables) {
    if (o >= k) throw UsageError("partition: observable index out of range");
  }
  // Observables are predicted by the LSTM branch.
  (void)observable_slots();
}

IonicModel::IonicModel(Definition def) : def_(std::move(def)) {
  const std::size_t k = def_.layout.size();
  if (def_.initial_state.size() != k) {
    throw UsageError("model " + def_.key + ": initial state has wrong dimension");
  }
  if (def_.currents.size() > kMaxCurrents) throw UsageError("too many currents");
  def_.partition.validate(def_.layout);
  for (const auto& g : def_.gates) {
    if (g.index >= k || def_.layout.kind(g.index) != VariableKind::kClassicGate) {
      throw UsageError("model " + def_.key + ": gate spec on a non-gate variable");
    }
  }
  std::size_t n_classic = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (def_.layout.kind(i) == VariableKind::kClassicGate) ++n_classic;
    if (def_.layout.kind(i) == VariableKind::kConcentration) concentrations_.push_back(i);
  }
  if (n_classic != def_.gates.size()) {
    throw UsageError("model " + def_.key + ": every classic gate needs a GateSpec");
  }
}

std::vector<std::string> IonicModel::current_names() const {
  std::vector<std::string> names;
  names.reserve(def_.currents.size());
  for (const auto& c : def_.currents) names.push_back(c.name);
  return names;
}

std::size_t IonicModel::current_index(std::string_view name) const {
  for (std::size_t i = 0; i < def_.currents.size(); ++i) {
    if (def_.currents[i].name == name) return i;
  }
  throw UsageError("model " + def_.key + " has no current " + std::string(name));
}

double IonicModel::current_scale(std::string_view name) const {
  return def_.currents[current_index(name)].conductance_scale;
}

void IonicModel::check_state(std::span<const double> state) const {
  if (state.size() != size()) {
    throw UsageError("state has dimension " + std::to_string(state.size()) +
                     ", model " + def_.key + " expects " + std::to_string(size()));
  }
}

void IonicModel::clamp(std::span<const double> state, std::span<double> out) const {
  for (std::size_t i = 0; i < state.size(); ++i) {
    double x = state[i];
    switch (def_.layout.kind(i)) {
      case VariableKind::kClassicGate:
        x = std::clamp(x, 0.0, 1.0);
        break;
      case VariableKind::kConcentration:
        x = std::max(x, kMinConcentration);
        break;
      case VariableKind::kAtypicalGate:
      case VariableKind::kVoltage:
        break;
    }
    out[i] = x;
  }
}

void IonicModel::eval_currents(std::span<const double> state,
                               std::span<double> out) const {
  check_state(state);
  for (std::size_t i : concentrations_) {
    if (!(state[i] > 0.0)) {
      throw DataError("nonpositive concentration (" + def_.layout.name(i) + ")");
    }
  }
  std::array<double, kMaxStateSize> clamped{};
  std::span<double> uc(clamped.data(), state.size());
  clamp(state, uc);
  for (std::size_t j = 0; j < def_.currents.size(); ++j) {
    const auto& c = def_.currents[j];
    out[j] = c.conductance_scale * c.formula(uc);
  }
}

std::map<std::string, double> IonicModel::current_map(
    std::span<const double> state) const {
  std::array<double, kMaxCurrents> values{};
  eval_currents(state, std::span<double>(values.data(), def_.currents.size()));
  std::map<std::string, double> out;
  for (std::size_t j = 0; j < def_.currents.size(); ++j) {
    out.emplace(def_.currents[j].name, values[j]);
  }
  return out;
}

void IonicModel::derivative(std::span<const double> state, double stimulus,
                            std::span<double> out, bool include_gates) const {
  check_state(state);
  const std::size_t n_cur = def_.currents.size();
  std::array<double, kMaxCurrents> currents{};
  eval_currents(state, std::span<double>(currents.data(), n_cur));

  double total = 0.0;
  for (std::size_t j = 0; j < n_cur; ++j) {
    if (def_.currents[j].membrane) total += currents[j];
  }
  const std::size_t iv = def_.layout.voltage_index();
  out[iv] = def_.voltage_sign / def_.capacitance * (total + stimulus);

  if (include_gates) {
    const double v = state[iv];
    for (const auto& g : def_.gates) out[g.index] = gate_derivative(state[g.index], v, g.spec);
  }
  if (def_.auxiliary) {
    std::array<double, kMaxStateSize> clamped{};
    std::span<double> uc(clamped.data(), state.size());
    clamp(state, uc);
    def_.auxiliary(uc, std::span<const double>(currents.data(), n_cur), stimulus, out);
  }
}

IonicModel IonicModel::with_current_scale(std::string_view current, double factor) const {
  Definition def = def_;
  def.currents[current_index(current)].conductance_scale *= factor;
  return IonicModel(std::move(def));
}

}  // namespace gatenet::model
