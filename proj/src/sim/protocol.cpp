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

#include "gatenet/sim/protocol.hpp"

#include <cmath>
#include <string>

#include "gatenet/error.hpp"

namespace gatenet::sim {

namespace {
constexpr double kTimeEps = 1e-9;
}

void PacingProtocol::validate() const {
  if (!(stimulus_duration > 0.0) || !(cycle_length > stimulus_duration)) {
    throw UsageError("pacing protocol requires cycle_length > stimulus_duration > 0");
  }
  if (!(total_duration >= cycle_length)) {
    throw UsageError("pacing protocol requires total_duration >= cycle_length");
  }
  if (!std::isfinite(stimulus_amplitude)) throw UsageError("stimulus amplitude must be finite");
}

double PacingProtocol::stimulus(double t) const {
  double phase = std::fmod(t, cycle_length);
  // Step times are products n * dt; treat values a rounding error short of a
  // cycle boundary as the boundary itself.
  if (phase > cycle_length - kTimeEps) phase = 0.0;
  return phase < stimulus_duration - kTimeEps ? stimulus_amplitude : 0.0;
}

PacingProtocol default_protocol(std::string_view model_key, double cycle_length,
                                double total_duration) {
  PacingProtocol p;
  p.cycle_length = cycle_length;
  p.total_duration = total_duration;
  if (model_key == "hh1952") {
    p.stimulus_amplitude = -20.0;
    p.stimulus_duration = 1.0;
  } else if (model_key == "tnnp2004") {
    p.stimulus_amplitude = -52.0;
    p.stimulus_duration = 1.0;
  } else {
    throw UsageError("unknown model " + std::string(model_key));
  }
  return p;
}

}  // namespace gatenet::sim
