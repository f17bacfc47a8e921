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

#include "gatenet/sim/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "gatenet/error.hpp"
#include "gatenet/parallel.hpp"
#include "json.hpp"

namespace gatenet::sim {

using nlohmann::json;

std::vector<double> cycle_length_range(double first, double last, double step) {
  if (!(step > 0.0)) throw UsageError("cycle-length step must be positive");
  if (first > last) throw UsageError("cycle-length range: min exceeds max");
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) out.push_back(first + static_cast<double>(i) * step);
  return out;
}

void split_indices(std::size_t n, double train_fraction, std::uint64_t seed,
                   std::vector<std::size_t>& train, std::vector<std::size_t>& validation) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw UsageError("train fraction must lie in (0, 1]");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  // Fisher-Yates with a fixed engine so the split is identical across
  // standard library implementations.
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * train_fraction));
  if (n >= 2) n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  else n_train = n;
  train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  validation.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(train.begin(), train.end());
  std::sort(validation.begin(), validation.end());
}

PacingProtocol dataset_protocol(const model::IonicModel& model, const DatasetOptions& options,
                                double cycle_length) {
  if (options.default_stimulus) return default_protocol(model.key(), cycle_length, options.duration);
  return PacingProtocol{cycle_length, options.stimulus_amplitude, options.stimulus_duration,
                        options.duration};
}

Dataset generate_dataset(const model::IonicModel& model, const DatasetOptions& options) {
  if (options.cycle_lengths.empty()) throw UsageError("at least one cycle length is required");
  if (!(options.discard >= 0.0) || !(options.discard < options.duration)) {
    throw UsageError("discarded transient must be shorter than the simulated duration");
  }
  std::vector<double> cls = options.cycle_lengths;
  std::sort(cls.begin(), cls.end());

  Dataset ds;
  ds.model_key = model.key();
  ds.seed = options.seed;
  ds.dt = options.dt_out;
  ds.segments.resize(cls.size());
  SimulationOptions sim{options.dt_inner, options.dt_out, options.discard};
  parallel_for(cls.size(), options.threads, [&](std::size_t i) {
    try {
      ds.segments[i] = simulate(model, dataset_protocol(model, options, cls[i]), sim);
    } catch (const NumericalError& e) {
      std::ostringstream os;
      os << "segment at cycle length " << cls[i] << " ms: " << e.what();
      throw NumericalError(os.str());
    }
  });
  split_indices(cls.size(), options.train_fraction, options.seed, ds.train_indices,
                ds.validation_indices);
  return ds;
}

namespace {

std::string segment_file_name(double cl) {
  std::ostringstream os;
  os << "segment_cl" << format_double(cl) << ".csv";
  return os.str();
}

}  // namespace

void save_dataset(const std::filesystem::path& dir, const Dataset& dataset,
                  const DatasetOptions& options) {
  std::filesystem::create_directories(dir);
  json manifest;
  manifest["format"] = "gatenet-dataset/1";
  manifest["model"] = dataset.model_key;
  manifest["variant"] = dataset.variant;
  manifest["scenario"] = dataset.scenario;
  manifest["seed"] = dataset.seed;
  manifest["dt"] = dataset.dt;
  manifest["dt_inner"] = options.dt_inner;
  manifest["duration"] = options.duration;
  manifest["discard"] = options.discard;
  manifest["train_indices"] = dataset.train_indices;
  manifest["validation_indices"] = dataset.validation_indices;
  json segs = json::array();
  for (std::size_t i = 0; i < dataset.segments.size(); ++i) {
    const auto& seg = dataset.segments[i];
    const std::string file = segment_file_name(seg.cycle_length());
    write_csv(dir / file, seg);
    const bool train = std::binary_search(dataset.train_indices.begin(),
                                          dataset.train_indices.end(), i);
    segs.push_back({{"file", file},
                    {"cycle_length", seg.cycle_length()},
                    {"samples", seg.samples()},
                    {"split", train ? "train" : "validation"}});
  }
  manifest["segments"] = segs;
  std::ofstream os(dir / "manifest.json");
  if (!os) throw DataError("cannot write " + (dir / "manifest.json").string());
  os << manifest.dump(2) << '\n';
}

Dataset load_dataset(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  std::ifstream is(path);
  if (!is) throw DataError("missing dataset manifest " + path.string());
  json manifest;
  try {
    manifest = json::parse(is);
    Dataset ds;
    ds.model_key = manifest.at("model").get<std::string>();
    ds.scenario = manifest.value("scenario", "control");
    ds.variant = manifest.value("variant", "epi");
    ds.seed = manifest.at("seed").get<std::uint64_t>();
    ds.dt = manifest.at("dt").get<double>();
    ds.train_indices = manifest.at("train_indices").get<std::vector<std::size_t>>();
    ds.validation_indices = manifest.at("validation_indices").get<std::vector<std::size_t>>();
    for (const auto& s : manifest.at("segments")) {
      ds.segments.push_back(read_csv(dir / s.at("file").get<std::string>(), ds.model_key,
                                     s.at("cycle_length").get<double>()));
    }
    for (auto idx : ds.train_indices) {
      if (idx >= ds.segments.size()) throw DataError("manifest: train index out of range");
    }
    for (auto idx : ds.validation_indices) {
      if (idx >= ds.segments.size()) throw DataError("manifest: validation index out of range");
    }
    return ds;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace gatenet::sim
