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

#include "gatenet/ode/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "gatenet/error.hpp"

namespace gatenet::ode {

namespace {

constexpr double kMinExcursion = 20.0;  // mV
constexpr double kUpstrokeSearch = 10.0;  // ms around the midpoint crossing

}  // namespace

ApMetrics ap_metrics(std::span<const double> t, std::span<const double> v,
                     std::span<const double> ca, std::size_t average) {
  if (t.size() != v.size() || (!ca.empty() && ca.size() != v.size())) {
    throw UsageError("ap_metrics: series lengths differ");
  }
  if (average == 0) throw UsageError("ap_metrics: need at least one beat to average");
  const std::size_t n = v.size();
  if (n < 3) throw DataError("no beat detected");
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  if (*hi_it - *lo_it < kMinExcursion) throw DataError("no beat detected");
  const double mid = 0.5 * (*hi_it + *lo_it);

  std::vector<std::size_t> crossings;
  for (std::size_t i = 1; i < n; ++i) {
    if (v[i - 1] < mid && v[i] >= mid) crossings.push_back(i);
  }
  if (crossings.empty()) throw DataError("no beat detected");

  ApMetrics m;
  std::vector<std::size_t> up_idx;
  for (std::size_t c = 0; c < crossings.size(); ++c) {
    const std::size_t ci = crossings[c];
    const std::size_t lo = c == 0 ? 1 : crossings[c - 1] + 1;
    const std::size_t hi = c + 1 < crossings.size() ? crossings[c + 1] : n;
    std::size_t best = ci;
    double best_slope = -INFINITY;
    for (std::size_t i = std::max<std::size_t>(lo, 1); i < hi; ++i) {
      if (std::abs(t[i] - t[ci]) > kUpstrokeSearch) {
        if (t[i] > t[ci]) break;
        continue;
      }
      const double slope = (v[i] - v[i - 1]) / (t[i] - t[i - 1]);
      if (slope > best_slope) {
        best_slope = slope;
        best = i;
      }
    }
    up_idx.push_back(best);
  }

  for (std::size_t b = 0; b < up_idx.size(); ++b) {
    Beat beat;
    const std::size_t u = up_idx[b];
    const std::size_t prev = b == 0 ? 0 : up_idx[b - 1];
    const std::size_t end = b + 1 < up_idx.size() ? crossings[b + 1] : n;
    beat.upstroke = t[u];
    beat.rest = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(prev),
                                  v.begin() + static_cast<std::ptrdiff_t>(u) + 1);
    const auto peak_it = std::max_element(v.begin() + static_cast<std::ptrdiff_t>(u),
                                          v.begin() + static_cast<std::ptrdiff_t>(end));
    beat.peak = *peak_it;
    const double level = beat.rest + 0.1 * (beat.peak - beat.rest);
    for (auto i = static_cast<std::size_t>(peak_it - v.begin()) + 1; i < end; ++i) {
      if (v[i] <= level) {
        const double frac = (level - v[i - 1]) / (v[i] - v[i - 1]);
        beat.apd90 = t[i - 1] + frac * (t[i] - t[i - 1]) - beat.upstroke;
        beat.complete = beat.apd90 > 0.0;
        break;
      }
    }
    m.beats.push_back(beat);
  }

  for (std::size_t b = m.beats.size(); b-- > 0 && m.averaged.size() < average;) {
    if (m.beats[b].complete) m.averaged.push_back(b);
  }
  if (m.averaged.empty()) throw DataError("no beat detected: no complete repolarization");
  std::reverse(m.averaged.begin(), m.averaged.end());

  for (std::size_t b : m.averaged) {
    m.apd90 += m.beats[b].apd90;
    m.peak_vm += m.beats[b].peak;
    m.resting_vm += m.beats[b].rest;
  }
  const double na = static_cast<double>(m.averaged.size());
  m.apd90 /= na;
  m.peak_vm /= na;
  m.resting_vm /= na;
  if (!ca.empty()) {
    const std::size_t first = up_idx[m.averaged.front()];
    const std::size_t last_b = m.averaged.back();
    const std::size_t last = last_b + 1 < up_idx.size() ? up_idx[last_b + 1] : n;
    const auto [cl, ch] = std::minmax_element(ca.begin() + static_cast<std::ptrdiff_t>(first),
                                              ca.begin() + static_cast<std::ptrdiff_t>(last));
    m.ca_amplitude = *ch - *cl;
  }
  return m;
}

ApMetrics ap_metrics(const sim::Trajectory& trajectory, const std::string& voltage,
                     const std::string& calcium, std::size_t average) {
  std::vector<double> t(trajectory.samples());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = trajectory.time(i);
  const auto v = trajectory.column(trajectory.index_of(voltage));
  std::vector<double> ca;
  const auto& names = trajectory.names();
  if (!calcium.empty() && std::find(names.begin(), names.end(), calcium) != names.end()) {
    ca = trajectory.column(trajectory.index_of(calcium));
  }
  return ap_metrics(t, v, ca, average);
}

CurrentStats beat_current_stats(const CurrentSeries& currents, const std::string& name,
                                const ApMetrics& metrics) {
  const auto& series = currents.values.at(currents.index_of(name));
  const auto& t = currents.t;
  if (metrics.averaged.empty() || t.size() < 2) throw DataError("no beat detected");
  CurrentStats out;
  for (std::size_t b : metrics.averaged) {
    const double start = metrics.beats[b].upstroke;
    double interval;
    if (b + 1 < metrics.beats.size()) {
      interval = metrics.beats[b + 1].upstroke - start;
    } else if (b > 0) {
      interval = start - metrics.beats[b - 1].upstroke;
    } else {
      interval = t.back() - start;
    }
    const double stop = start + interval;
    double integral = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] < start - 1e-9 || t[i] > stop + 1e-9) continue;
      if (std::abs(series[i]) > std::abs(peak)) peak = series[i];
      if (i + 1 < t.size() && t[i + 1] <= stop + 1e-9) {
        integral += 0.5 * (series[i] + series[i + 1]) * (t[i + 1] - t[i]);
      }
    }
    out.integral += integral;
    out.peak += peak;
  }
  const double nb = static_cast<double>(metrics.averaged.size());
  out.integral /= nb;
  out.peak /= nb;
  return out;
}

}  // namespace gatenet::ode
