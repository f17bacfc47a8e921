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

#include <sstream>

namespace gatenet {

namespace {

std::string divergence_message(double time, const std::string& variable) {
  std::ostringstream os;
  os << "integration diverged at t = " << time << " ms (variable " << variable
     << ")";
  return os.str();
}

}  // namespace

DivergenceError::DivergenceError(double time, std::string variable)
    : NumericalError(divergence_message(time, variable)),
      time_(time),
      variable_(std::move(variable)) {}

}  // namespace gatenet
