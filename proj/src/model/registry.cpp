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

#include "gatenet/error.hpp"
#include "gatenet/model/models.hpp"

namespace gatenet::model {

IonicModel make_model(std::string_view key, const ModelOptions& options) {
  if (key == "hh1952") return hh1952();
  if (key == "tnnp2004") return tnnp2004(options.variant);
  throw UsageError("unknown model " + std::string(key));
}

std::vector<std::string> model_keys() { return {"hh1952", "tnnp2004"}; }

Scenario parse_scenario(std::string_view name) {
  if (name == "control") return Scenario::kControl;
  if (name == "long_qt") return Scenario::kLongQt;
  if (name == "short_qt") return Scenario::kShortQt;
  if (name == "ito") return Scenario::kIto;
  throw UsageError("unknown scenario " + std::string(name) +
                   " (expected control, long_qt, short_qt or ito)");
}

std::string_view scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::kControl: return "control";
    case Scenario::kLongQt: return "long_qt";
    case Scenario::kShortQt: return "short_qt";
    case Scenario::kIto: return "ito";
  }
  return "control";
}

IonicModel with_perturbation(const IonicModel& model, Scenario scenario) {
  if (model.key() != "tnnp2004") {
    throw UsageError("perturbation scenarios are defined for tnnp2004 only");
  }
  switch (scenario) {
    case Scenario::kControl: return model;
    case Scenario::kLongQt: return model.with_current_scale("I_Kr", 0.5);
    case Scenario::kShortQt: return model.with_current_scale("I_CaL", 0.5);
    case Scenario::kIto: return model.with_current_scale("I_to", 3.0);
  }
  throw UsageError("unknown scenario");
}

}  // namespace gatenet::model
