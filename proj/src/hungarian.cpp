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

#include "valmet/hungarian.hpp"

#include <cmath>
#include <limits>

#include "valmet/metric_value.hpp"

namespace valmet {

namespace {

// Requires n <= m. a is 1-based n x m.
std::vector<int> hungarian_rows_le_cols(const std::vector<std::vector<double>>& a, int n, int m) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

AssignmentSolution solve_assignment(std::span<const double> cost, int rows, int cols) {
  if (rows < 0 || cols < 0 || cost.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols)) {
    throw ShapeError("cost matrix does not match its dimensions");
  }
  for (double c : cost) {
    if (!std::isfinite(c)) throw ParameterError("assignment costs must be finite");
  }
  AssignmentSolution sol;
  sol.row_to_col.assign(static_cast<size_t>(rows), -1);
  if (rows == 0 || cols == 0) return sol;

  const bool transpose = rows > cols;
  const int n = transpose ? cols : rows;
  const int m = transpose ? rows : cols;
  std::vector<std::vector<double>> a(n + 1, std::vector<double>(m + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      a[i + 1][j + 1] = transpose ? cost[static_cast<size_t>(j) * cols + i]
                                  : cost[static_cast<size_t>(i) * cols + j];
    }
  }
  const auto match = hungarian_rows_le_cols(a, n, m);
  for (int i = 0; i < n; ++i) {
    if (match[i] < 0) continue;
    if (transpose) {
      sol.row_to_col[static_cast<size_t>(match[i])] = i;
    } else {
      sol.row_to_col[static_cast<size_t>(i)] = match[i];
    }
  }
  for (int r = 0; r < rows; ++r) {
    const int c = sol.row_to_col[static_cast<size_t>(r)];
    if (c >= 0) sol.total_cost += cost[static_cast<size_t>(r) * cols + c];
  }
  return sol;
}

}  // namespace valmet
