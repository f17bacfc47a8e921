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

#include <string>
#include <string_view>
#include <vector>

#include "gatenet/model/ionic_model.hpp"

namespace gatenet::model {

enum class TnnpVariant { kEpicardial, kEndocardial, kMCell };

TnnpVariant parse_tnnp_variant(std::string_view name);
std::string_view variant_name(TnnpVariant variant);

// Hodgkin & Huxley (1952) squid axon, modern sign convention (rest near
// -65 mV). State: V, m, h, n. Observable: V.
IonicModel hh1952();

// ten Tusscher, Noble, Noble & Panfilov (2004) human ventricular myocyte.
// 17 state variables; V and Ca_i are observable; the ten classic gates
// m, h, j, d, f, xr1, xr2, xs, r, s form the gating partition. I_K1 uses an
// instantaneous (non-state) rectification factor.
IonicModel tnnp2004(TnnpVariant variant = TnnpVariant::kEpicardial);

struct ModelOptions {
  TnnpVariant variant = TnnpVariant::kEpicardial;
};

// Registered keys: "hh1952", "tnnp2004". Throws UsageError otherwise.
IonicModel make_model(std::string_view key, const ModelOptions& options = {});
std::vector<std::string> model_keys();

enum class Scenario { kControl, kLongQt, kShortQt, kIto };

Scenario parse_scenario(std::string_view name);
std::string_view scenario_name(Scenario scenario);

// long_qt: I_Kr x 0.5; short_qt: I_CaL x 0.5; ito: I_to x 3. Gate kinetics
// are untouched. Requires the tnnp2004 model.
IonicModel with_perturbation(const IonicModel& model, Scenario scenario);

}  // namespace gatenet::model
