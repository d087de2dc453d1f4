#pragma once

// Global-nearest-neighbor association: maximum-cardinality, minimum-cost
// one-to-one matching over gated (row, col) pairs, with deterministic
// lexicographic tie-breaking among equal-cost optima.

#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace trustmtt {

struct Assignment {
  std::vector<std::pair<int, int>> pairs;  // (row, col) == (track, detection)
  std::vector<int> unassigned_rows;
  std::vector<int> unassigned_cols;
  double total_cost = 0.0;
};

namespace detail {

constexpr double kForbidden = 1e15;
constexpr double kUnassignPenalty = 1e6;

// Shortest-augmenting-path solver for a square matrix. Entries >= kForbidden
// are treated as unusable; a finite perfect matching must exist.
inline std::vector<int> solve_square(const std::vector<std::vector<double>>& a) {
  const int n = static_cast<int>(a.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, n), way(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    p[n] = i;
    int j0 = n;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 0; j < n; ++j) {
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
      if (j1 < 0 || delta == inf)
        throw std::runtime_error("assignment: no feasible perfect matching");
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != n);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != n);
  }
  std::vector<int> col_of_row(n, -1);
  for (int j = 0; j < n; ++j)
    if (p[j] != n) col_of_row[p[j]] = j;
  return col_of_row;
}

// Padded square: real block (gated cost or forbidden), one personal
// unassignment slot per row and per column, zero-cost dummy block.
inline std::vector<std::vector<double>> pad(const std::vector<std::vector<double>>& cost,
                                            const std::vector<std::vector<char>>& gated) {
  const int nr = static_cast<int>(cost.size());
  const int nc = nr > 0 ? static_cast<int>(cost[0].size()) : 0;
  const int n = nr + nc;
  std::vector<std::vector<double>> a(n, std::vector<double>(n, kForbidden));
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j)
      if (gated[i][j]) a[i][j] = cost[i][j];
  for (int i = 0; i < nr; ++i) a[i][nc + i] = kUnassignPenalty;
  for (int j = 0; j < nc; ++j) a[nr + j][j] = kUnassignPenalty;
  for (int i = nr; i < n; ++i)
    for (int j = nc; j < n; ++j) a[i][j] = 0.0;
  return a;
}

inline double padded_total(const std::vector<std::vector<double>>& a,
                           const std::vector<int>& col_of_row) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][col_of_row[i]];
  return t;
}

}  // namespace detail

// gated[i][j] marks admissible pairs; cost is ignored where not gated.
inline Assignment associate(const std::vector<std::vector<double>>& cost,
                            const std::vector<std::vector<char>>& gated) {
  const int nr = static_cast<int>(cost.size());
  const int nc = nr > 0 ? static_cast<int>(cost[0].size()) : 0;
  Assignment out;
  if (nr == 0 || nc == 0) {
    for (int i = 0; i < nr; ++i) out.unassigned_rows.push_back(i);
    for (int j = 0; j < nc; ++j) out.unassigned_cols.push_back(j);
    return out;
  }

  auto a = detail::pad(cost, gated);
  const auto base = detail::solve_square(a);
  const double best = detail::padded_total(a, base);

  // Lexicographic canonicalization: fix (row, col) pairs in ascending order
  // whenever forcing the pair preserves the optimal padded total.
  std::vector<char> row_fixed(nr, 0), col_fixed(nc, 0);
  auto current = base;
  for (int i = 0; i < nr; ++i) {
    if (row_fixed[i]) continue;
    for (int j = 0; j < nc; ++j) {
      if (col_fixed[j] || !gated[i][j]) continue;
      std::vector<double> saved_row = a[i];
      std::vector<double> saved_col(nr + nc);
      for (int r = 0; r < nr + nc; ++r) saved_col[r] = a[r][j];
      for (int c = 0; c < nr + nc; ++c) a[i][c] = detail::kForbidden;
      for (int r = 0; r < nr + nc; ++r) a[r][j] = detail::kForbidden;
      a[i][j] = cost[i][j];
      bool ok = false;
      try {
        const auto forced = detail::solve_square(a);
        if (detail::padded_total(a, forced) <= best + 1e-9) {
          ok = true;
          current = forced;
        }
      } catch (const std::runtime_error&) {
      }
      if (ok) {
        row_fixed[i] = 1;
        col_fixed[j] = 1;
        break;
      }
      a[i] = saved_row;
      for (int r = 0; r < nr + nc; ++r) a[r][j] = saved_col[r];
    }
  }

  for (int i = 0; i < nr; ++i) {
    const int j = current[i];
    if (j < nc && gated[i][j]) {
      out.pairs.emplace_back(i, j);
      out.total_cost += cost[i][j];
    } else {
      out.unassigned_rows.push_back(i);
    }
  }
  std::vector<char> col_used(nc, 0);
  for (const auto& [i, j] : out.pairs) col_used[j] = 1;
  for (int j = 0; j < nc; ++j)
    if (!col_used[j]) out.unassigned_cols.push_back(j);
  return out;
}

}  // namespace trustmtt
