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

#include <span>
#include <string>
#include <vector>

#include "gatenet/ode/neural_ode.hpp"
#include "gatenet/sim/trajectory.hpp"

namespace gatenet::ode {

struct Beat {
  double upstroke = 0.0;     // time of maximum dV/dt, ms
  double peak = 0.0;         // mV
  double rest = 0.0;         // mV, minimum before the upstroke
  double apd90 = 0.0;        // ms
  bool complete = false;     // repolarized to 90% before the next upstroke
};

struct ApMetrics {
  double apd90 = 0.0;        // ms, mean over the averaged beats
  double peak_vm = 0.0;      // mV
  double resting_vm = 0.0;   // mV
  double ca_amplitude = 0.0; // max - min of Ca_i over the averaged beats (0 without Ca_i)
  std::vector<Beat> beats;   // every detected beat
  std::vector<std::size_t> averaged;  // indices into beats
};

// Action-potential metrics of a sampled voltage trace. A beat starts at an
// upward crossing of the midpoint between the trace's extremes; its upstroke
// time is the sample of maximum backward-difference dV/dt in the preceding
// half of the excursion. APD90 runs from the upstroke to the linearly
// interpolated crossing of rest + 0.1 (peak - rest). The last `average`
// complete beats are averaged. Throws DataError("no beat detected") when
// the trace has no excursion of at least 20 mV or no complete beat.
ApMetrics ap_metrics(std::span<const double> t, std::span<const double> v,
                     std::span<const double> ca = {}, std::size_t average = 3);
ApMetrics ap_metrics(const sim::Trajectory& trajectory, const std::string& voltage = "V",
                     const std::string& calcium = "Ca_i", std::size_t average = 3);

// Per-beat statistics of one current, averaged over the same beats as the
// metrics: trapezoidal time integral from one upstroke to the next, and
// the signed value of largest magnitude.
struct CurrentStats {
  double integral = 0.0;  // (pA/pF) ms
  double peak = 0.0;      // pA/pF
};

CurrentStats beat_current_stats(const CurrentSeries& currents, const std::string& name,
                                const ApMetrics& metrics);

}  // namespace gatenet::ode
