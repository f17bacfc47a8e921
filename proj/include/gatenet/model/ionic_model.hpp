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

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gatenet/model/gate.hpp"

namespace gatenet::model {

// Upper bound on state and current counts; lets hot paths use stack buffers.
inline constexpr std::size_t kMaxStateSize = 48;
inline constexpr std::size_t kMaxCurrents = 32;

inline constexpr double kMinConcentration = 1e-12;

enum class VariableKind { kVoltage, kConcentration, kClassicGate, kAtypicalGate };

std::string_view kind_name(VariableKind kind);

class StateLayout {
 public:
  StateLayout() = default;
  // Throws UsageError unless names are unique and exactly one variable is a
  // voltage.
  StateLayout(std::vector<std::string> names, std::vector<VariableKind> kinds);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<VariableKind>& kinds() const { return kinds_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  VariableKind kind(std::size_t i) const { return kinds_.at(i); }
  std::size_t voltage_index() const { return voltage_; }

  // Throws UsageError for unknown names.
  std::size_t index_of(std::string_view name) const;
  bool contains(std::string_view name) const;

 private:
  std::vector<std::string> names_;
  std::vector<VariableKind> kinds_;
  std::size_t voltage_ = 0;
};

// O (observables), H (gates integrated by the gating layer) and the
// remaining variables handled by the LSTM branch. Index lists refer to the
// state layout and keep layout order.
struct StatePartition {
  std::vector<std::size_t> observables;
  std::vector<std::size_t> gnn_gates;
  std::vector<std::size_t> lstm_vars;

  // Position of each observable inside lstm_vars.
  std::vector<std::size_t> observable_slots() const;

  // Throws UsageError if the partition is inconsistent with the layout.
  void validate(const StateLayout& layout) const;

  bool operator==(const StatePartition&) const = default;
};

struct CurrentSpec {
  std::string name;
  double conductance_scale = 1.0;
  // Transmembrane currents enter the voltage equation; fluxes between
  // intracellular compartments do not.
  bool membrane = true;
  // Evaluated on a clamped state; returns the unscaled current.
  std::function<double(std::span<const double>)> formula;
};

// Remaining terms of the right-hand side (concentrations, atypical gates).
// Receives the clamped state, the scaled currents in model order and the
// stimulus current, and writes only the entries it owns.
using AuxiliaryRhs = std::function<void(std::span<const double> state,
                                        std::span<const double> currents,
                                        double stimulus,
                                        std::span<double> derivative)>;

struct ClassicGate {
  std::size_t index;
  GateSpec spec;
};

// A cell model: voltage equation, Hodgkin-Huxley gates and auxiliary
// dynamics. Immutable after construction.
class IonicModel {
 public:
  struct Definition {
    std::string key;
    StateLayout layout;
    StatePartition partition;
    std::vector<ClassicGate> gates;
    std::vector<CurrentSpec> currents;
    AuxiliaryRhs auxiliary;
    double capacitance = 1.0;
    // Voltage equation: V' = sign / C_m * (sum of membrane currents + I_stim).
    // Sources with outward-positive currents use -1.
    double voltage_sign = -1.0;
    std::vector<double> initial_state;
  };

  explicit IonicModel(Definition def);

  const std::string& key() const { return def_.key; }
  const StateLayout& layout() const { return def_.layout; }
  const StatePartition& partition() const { return def_.partition; }
  const std::vector<ClassicGate>& gates() const { return def_.gates; }
  const std::vector<CurrentSpec>& currents() const { return def_.currents; }
  const std::vector<double>& initial_state() const { return def_.initial_state; }
  double capacitance() const { return def_.capacitance; }
  double voltage_sign() const { return def_.voltage_sign; }
  std::size_t size() const { return def_.layout.size(); }

  std::vector<std::string> current_names() const;
  std::size_t current_index(std::string_view name) const;
  double current_scale(std::string_view name) const;

  // Classic gates clamped to [0,1], concentrations floored at
  // kMinConcentration. Atypical gates pass through: their steady state may
  // exceed 1 (fCa in tnnp2004 reaches ~1.006 at diastolic Ca_i).
  void clamp(std::span<const double> state, std::span<double> out) const;

  // Scaled currents in model order. Throws DataError("nonpositive
  // concentration") if a concentration is <= 0 and UsageError on a
  // dimension mismatch.
  void eval_currents(std::span<const double> state, std::span<double> out) const;
  std::map<std::string, double> current_map(std::span<const double> state) const;

  // Full right-hand side. With include_gates == false the classic-gate
  // entries are left untouched.
  void derivative(std::span<const double> state, double stimulus,
                  std::span<double> out, bool include_gates = true) const;

  // Copy with one current's conductance multiplied by `factor`.
  IonicModel with_current_scale(std::string_view current, double factor) const;

 private:
  void check_state(std::span<const double> state) const;

  Definition def_;
  std::vector<std::size_t> concentrations_;
};

}  // namespace gatenet::model
