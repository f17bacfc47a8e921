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
#include <functional>

namespace gatenet {

// Number of worker threads to use when the caller passes 0.
std::size_t default_thread_count();

// Runs body(i) for i in [0, n) on up to `threads` threads (0 = default).
// Indices are handed out one at a time; callers write results into slot i so the
// outcome does not depend on scheduling. The first exception thrown by any
// body is rethrown after all workers have joined.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace gatenet
