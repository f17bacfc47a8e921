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

#include <string_view>

namespace gatenet::sim {

// Periodic square-pulse pacing. A stimulus of `stimulus_amplitude` is applied
// whenever t mod cycle_length < stimulus_duration.
struct PacingProtocol {
  double cycle_length = 1000.0;        // ms
  double stimulus_amplitude = -52.0;   // pA/pF (inward for the sign convention used)
  double stimulus_duration = 1.0;      // ms
  double total_duration = 1000.0;      // ms

  // Throws UsageError unless cycle_length > stimulus_duration > 0 and
  // total_duration >= cycle_length.
  void validate() const;

  double stimulus(double t) const;
};

// Conventional stimulus for a registered model: -52 pA/pF for 1 ms
// (tnnp2004) or -20 uA/cm^2 for 1 ms (hh1952).
PacingProtocol default_protocol(std::string_view model_key, double cycle_length,
                                double total_duration);

}  // namespace gatenet::sim
