#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace mondrian {

struct Assignment {
  /// row -> column, or -1 when the row is unmatched
  std::vector<int> row_to_col;
  double total = 0.0;
};

/// Exact maximum-weight bipartite matching (Hungarian method, O(n^2 m)) on a
/// dense rows x cols weight matrix. Every row or every column is matched,
/// whichever side is smaller.
inline Assignment max_weight_matching(const std::vector<std::vector<double>>& weights) {
  const std::size_t rows = weights.size();
  const std::size_t cols = rows == 0 ? 0 : weights[0].size();
  Assignment result;
  result.row_to_col.assign(rows, -1);
  if (rows == 0 || cols == 0) return result;

  const bool transpose = rows > cols;
  const std::size_t n = transpose ? cols : rows;  // n <= m
  const std::size_t m = transpose ? rows : cols;
  auto cost = [&](std::size_t i, std::size_t j) {
    return transpose ? -weights[j][i] : -weights[i][j];
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based potentials; p[j] = row matched to column j
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      std::size_t i0 = p[j0], j1 = 0;
      double delta = kInf;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
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
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    std::size_t small = p[j] - 1;
    std::size_t large = j - 1;
    std::size_t r = transpose ? large : small;
    std::size_t c = transpose ? small : large;
    result.row_to_col[r] = static_cast<int>(c);
    result.total += weights[r][c];
  }
  return result;
}

}  // namespace mondrian
