#include "wgf/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wgf::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

AssignmentResult solve_assignment(const std::vector<double>& cost, int n) {
  // 1-based internals; p[j] = row matched to column j.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<double> minv(n + 1);
  std::vector<char> used(n + 1);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = kInf;
      const double* row = cost.data() + static_cast<std::size_t>(i0 - 1) * n;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
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
    } while (j0);
  }

  AssignmentResult result;
  result.row_to_col.assign(n, -1);
  result.row_dual.assign(n, 0.0);
  result.col_dual.assign(n, 0.0);
  for (int j = 1; j <= n; ++j) {
    result.row_to_col[p[j] - 1] = j - 1;
    result.col_dual[j - 1] = v[j];
  }
  for (int i = 1; i <= n; ++i) result.row_dual[i - 1] = u[i];
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += cost[static_cast<std::size_t>(i) * n + result.row_to_col[i]];
  result.cost = total;
  return result;
}

double assignment_gap(const std::vector<double>& cost, int n, const AssignmentResult& result) {
  if (n <= 1) return kInf;

  // Reduced costs; tiny negatives are dual round-off, clamp to zero.
  auto reduced = [&](int i, int j) {
    const double rc = cost[static_cast<std::size_t>(i) * n + j] - result.row_dual[i] - result.col_dual[j];
    return rc > 0.0 ? rc : 0.0;
  };

  // Any permutation differing from the optimum decomposes into alternating
  // cycles; its extra cost is the cycle-weight sum. The minimum single cycle
  // in the column graph (edge sigma(i) -> j weighted reduced(i, j)) is the
  // exact second-best gap.
  std::vector<int> col_to_row(n);
  for (int i = 0; i < n; ++i) col_to_row[result.row_to_col[i]] = i;

  double best = kInf;
  std::vector<double> dist(n);
  std::vector<char> done(n);
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), 0);
    dist[s] = 0.0;
    for (int iter = 0; iter < n; ++iter) {
      int a = -1;
      double da = kInf;
      for (int c = 0; c < n; ++c)
        if (!done[c] && dist[c] < da) {
          da = dist[c];
          a = c;
        }
      if (a < 0 || da >= best) break;
      done[a] = 1;
      const int i = col_to_row[a];
      for (int b = 0; b < n; ++b) {
        if (b == a) continue;
        const double nd = da + reduced(i, b);
        if (b == s) {
          if (nd < best) best = nd;
        } else if (nd < dist[b]) {
          dist[b] = nd;
        }
      }
    }
  }
  return best;
}

namespace {

// Exact solve of the subproblem on `rows` x `cols` (same order).
double subproblem_cost(const std::vector<double>& cost, int n, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  const int m = static_cast<int>(rows.size());
  if (m == 0) return 0.0;
  std::vector<double> sub(static_cast<std::size_t>(m) * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      sub[static_cast<std::size_t>(a) * m + b] = cost[static_cast<std::size_t>(rows[a]) * n + cols[b]];
  return solve_assignment(sub, m).cost;
}

}  // namespace

std::vector<int> lexicographic_min_assignment(const std::vector<double>& cost, int n,
                                              const AssignmentResult& result, double tie_tol) {
  const double budget = result.cost + tie_tol;
  std::vector<int> sigma(n, -1);
  std::vector<char> col_used(n, 0);

  // Dual-based lower bound: any completion of the remaining rows/columns
  // costs at least the corresponding dual sums.
  std::vector<double> row_dual_suffix(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) row_dual_suffix[i] = row_dual_suffix[i + 1] + result.row_dual[i];
  double free_col_dual_sum = 0.0;
  for (int j = 0; j < n; ++j) free_col_dual_sum += result.col_dual[j];

  double fixed = 0.0;
  for (int i = 0; i < n; ++i) {
    bool placed = false;
    for (int j = 0; j < n && !placed; ++j) {
      if (col_used[j]) continue;
      const double cij = cost[static_cast<std::size_t>(i) * n + j];
      const double bound =
          fixed + cij + row_dual_suffix[i + 1] + (free_col_dual_sum - result.col_dual[j]);
      if (bound > budget) continue;  // cannot be within the tie tolerance
      std::vector<int> rows, cols;
      for (int r = i + 1; r < n; ++r) rows.push_back(r);
      for (int c = 0; c < n; ++c)
        if (!col_used[c] && c != j) cols.push_back(c);
      const double rest = subproblem_cost(cost, n, rows, cols);
      if (fixed + cij + rest <= budget) {
        sigma[i] = j;
        col_used[j] = 1;
        fixed += cij;
        free_col_dual_sum -= result.col_dual[j];
        placed = true;
      }
    }
    if (!placed) {
      // Unreachable for consistent inputs: the optimal column always fits.
      sigma[i] = result.row_to_col[i];
      col_used[sigma[i]] = 1;
      fixed += cost[static_cast<std::size_t>(i) * n + sigma[i]];
      free_col_dual_sum -= result.col_dual[sigma[i]];
    }
  }
  return sigma;
}

}  // namespace wgf::detail
