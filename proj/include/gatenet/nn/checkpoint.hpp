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

#include <filesystem>
#include <string>

#include "gatenet/model/ionic_model.hpp"
#include "gatenet/nn/network.hpp"

namespace gatenet::nn {

inline constexpr int kCheckpointVersion = 1;

// JSON checkpoint. Doubles are written in shortest round-trip form, so
// load(save(p)) == p bit for bit.
std::string checkpoint_to_string(const NetworkParams& params);
NetworkParams checkpoint_from_string(const std::string& text);

// Throws DataError with the path on I/O or format errors.
void save_checkpoint(const std::filesystem::path& path, const NetworkParams& params);
NetworkParams load_checkpoint(const std::filesystem::path& path);

// Throws DataError("checkpoint/model mismatch: ...") when the checkpoint
// was not built for this model's layout and partition.
void check_compatible(const NetworkParams& params, const model::IonicModel& model);

}  // namespace gatenet::nn
