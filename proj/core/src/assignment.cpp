// Copyright 2026 The BAAS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "baas/assignment.hpp"

#include <algorithm>
#include <limits>

namespace baas {

namespace {

// Rows <= cols. Classic O(n^2 m) shortest augmenting path with potentials.
std::vector<int> solve(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0);
  std::vector<int> way(m + 1, 0);
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
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
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

std::vector<std::pair<int, int>> min_cost_assignment(const Eigen::MatrixXd& cost, double max_cost) {
  std::vector<std::pair<int, int>> out;
  if (cost.rows() == 0 || cost.cols() == 0) return out;
  // Forbidden entries cost more than any feasible assignment could.
  const double forbidden = (max_cost + 1.0) * static_cast<double>(cost.rows() + cost.cols() + 1) + 1.0;
  Eigen::MatrixXd c = cost.unaryExpr([&](double x) { return x <= max_cost ? x : forbidden; });
  const bool transpose = c.rows() > c.cols();
  if (transpose) c.transposeInPlace();
  const std::vector<int> match = solve(c);
  for (int i = 0; i < static_cast<int>(match.size()); ++i) {
    const int j = match[i];
    if (j < 0) continue;
    const int row = transpose ? j : i;
    const int col = transpose ? i : j;
    if (cost(row, col) <= max_cost) out.emplace_back(row, col);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace baas
