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

#include "gatenet/sim/trajectory.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gatenet/error.hpp"

namespace gatenet::sim {

Trajectory::Trajectory(std::string model_key, std::vector<std::string> names, double dt,
                       double t0, double cycle_length)
    : model_key_(std::move(model_key)),
      names_(std::move(names)),
      dt_(dt),
      t0_(t0),
      cycle_length_(cycle_length) {
  if (!(dt_ > 0.0)) throw UsageError("trajectory dt must be positive");
}

std::span<const double> Trajectory::row(std::size_t i) const {
  return std::span<const double>(values_).subspan(i * dimension(), dimension());
}

std::size_t Trajectory::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  throw UsageError("trajectory has no variable " + std::string(name));
}

std::vector<double> Trajectory::column(std::size_t var) const {
  std::vector<double> out(samples());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i, var);
  return out;
}

void Trajectory::push_back(std::span<const double> state) {
  if (state.size() != dimension()) throw UsageError("trajectory row has wrong dimension");
  for (std::size_t j = 0; j < state.size(); ++j) {
    if (!std::isfinite(state[j])) {
      throw DataError("non-finite value for " + names_[j] + " at t = " +
                      std::to_string(time(samples())));
    }
  }
  values_.insert(values_.end(), state.begin(), state.end());
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

void write_row(std::ostream& os, double t, std::span<const double> values) {
  os << format_double(t);
  for (double v : values) os << ',' << format_double(v);
  os << '\n';
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  return os;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream os = open_for_write(path);
  os << 't';
  for (const auto& n : traj.names()) os << ',' << n;
  os << '\n';
  for (std::size_t i = 0; i < traj.samples(); ++i) write_row(os, traj.time(i), traj.row(i));
  if (!os) throw DataError("error writing " + path.string());
}

void write_table_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::ofstream os = open_for_write(path);
  for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << format_double(r[j]);
    os << '\n';
  }
  if (!os) throw DataError("error writing " + path.string());
}

Trajectory read_csv(const std::filesystem::path& path, std::string model_key,
                    double cycle_length) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw DataError(path.string() + ": empty file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 2 || header.front() != "t") {
    throw DataError(path.string() + ": header must start with t");
  }
  std::vector<std::string> names(header.begin() + 1, header.end());
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> row(names.size());
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = p + line.size();
    double t = 0.0;
    for (std::size_t j = 0; j <= names.size(); ++j) {
      double x = 0.0;
      auto res = std::from_chars(p, end, x);
      if (res.ec != std::errc()) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad number");
      }
      if (j == 0) t = x; else row[j - 1] = x;
      p = res.ptr;
      if (j < names.size()) {
        if (p == end || *p != ',') {
          throw DataError(path.string() + ":" + std::to_string(line_no) + ": too few columns");
        }
        ++p;
      }
    }
    times.push_back(t);
    values.insert(values.end(), row.begin(), row.end());
  }
  if (times.empty()) throw DataError(path.string() + ": no samples");
  const double dt = times.size() > 1 ? times[1] - times[0] : 1.0;
  Trajectory traj(std::move(model_key), names, dt, times.front(), cycle_length);
  traj.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    traj.push_back(std::span<const double>(values).subspan(i * names.size(), names.size()));
  }
  return traj;
}

}  // namespace gatenet::sim
