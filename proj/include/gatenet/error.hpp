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

#include <stdexcept>
#include <string>

namespace gatenet {

// Base class for every error raised by the library. The CLI maps the
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or configuration (exit code 1).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed, missing or inconsistent input data (exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

// Non-finite values during integration, rollout or training (exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Integration produced a non-finite state variable.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(double time, std::string variable);

  double time() const { return time_; }
  const std::string& variable() const { return variable_; }

 private:
  double time_;
  std::string variable_;
};

}  // namespace gatenet
