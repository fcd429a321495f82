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

#include <span>
#include <vector>

namespace valmet {

struct AssignmentSolution {
  std::vector<int> row_to_col;  // -1 for unassigned rows
  double total_cost = 0.0;
};

/// Minimum-cost assignment on a rows x cols cost matrix (row-major),
/// matching min(rows, cols) pairs. Shortest augmenting path with
/// potentials, O(n^2 m).
AssignmentSolution solve_assignment(std::span<const double> cost, int rows, int cols);

}  // namespace valmet
