/* Copyright 2026 The valmet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace valmet::kernels {

/// Worker count used by every OpenMP kernel. Defaults to the OpenMP runtime
/// default; set_num_threads(0) restores it.
void set_num_threads(int n);
int num_threads();

/// Runs body(i) for i in [0, n) across the worker pool. Results must be
/// written to per-index slots; any floating-point reduction over them is
/// done afterwards in index order so output does not depend on the thread
/// count.
void parallel_for(int64_t n, const std::function<void(int64_t)>& body);

/// Serial counterpart, kept for testing and benchmarking.
void serial_for(int64_t n, const std::function<void(int64_t)>& body);

}  // namespace valmet::kernels
