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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace gatenet::sim {

// Time-sampled state. Row i holds every variable at t0 + i * dt.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::string model_key, std::vector<std::string> names, double dt,
             double t0, double cycle_length);

  const std::string& model_key() const { return model_key_; }
  const std::vector<std::string>& names() const { return names_; }
  double dt() const { return dt_; }
  double t0() const { return t0_; }
  double cycle_length() const { return cycle_length_; }
  std::size_t dimension() const { return names_.size(); }
  std::size_t samples() const { return dimension() ? values_.size() / dimension() : 0; }
  bool empty() const { return values_.empty(); }

  double time(std::size_t i) const { return t0_ + static_cast<double>(i) * dt_; }
  std::span<const double> row(std::size_t i) const;
  double at(std::size_t i, std::size_t var) const { return values_[i * dimension() + var]; }
  const std::vector<double>& values() const { return values_; }

  // Throws UsageError for unknown names.
  std::size_t index_of(std::string_view name) const;
  std::vector<double> column(std::size_t var) const;

  // Appends one sample; throws DataError if any value is non-finite.
  void push_back(std::span<const double> state);
  void reserve(std::size_t samples) { values_.reserve(samples * dimension()); }

 private:
  std::string model_key_;
  std::vector<std::string> names_;
  double dt_ = 1.0;
  double t0_ = 0.0;
  double cycle_length_ = 0.0;
  std::vector<double> values_;
};

// CSV with header `t,<var1>,<var2>,...`, one row per sample. Numbers use the
// shortest representation that parses back to the identical double.
void write_csv(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_csv(const std::filesystem::path& path, std::string model_key,
                    double cycle_length);

// Shortest round-trip formatting of a double.
std::string format_double(double x);

// Generic numeric table writer used for current series and logs.
void write_table_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

}  // namespace gatenet::sim
