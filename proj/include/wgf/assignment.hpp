#pragma once

#include <vector>

namespace wgf::detail {

/// Result of an exact square assignment solve. Dual variables certify
/// optimality: cost(i,j) - row_dual[i] - col_dual[j] >= 0 with equality
/// on assigned pairs.
struct AssignmentResult {
  std::vector<int> row_to_col;
  std::vector<double> row_dual;
  std::vector<double> col_dual;
  double cost = 0.0;  // sum of selected entries
};

/// Shortest-augmenting-path (Jonker-Volgenant style) exact solver, O(n^3).
/// `cost` is row-major n x n.
AssignmentResult solve_assignment(const std::vector<double>& cost, int n);

/// Gap between the optimal cost and the best strictly different permutation
/// (+inf when n == 1). Computed as the minimum-weight alternating cycle in
/// the reduced-cost graph, so it is exact for the given duals.
double assignment_gap(const std::vector<double>& cost, int n, const AssignmentResult& result);

/// Lexicographically smallest permutation with cost <= best_cost + tie_tol.
/// `result` must come from solve_assignment on the same matrix.
std::vector<int> lexicographic_min_assignment(const std::vector<double>& cost, int n,
                                              const AssignmentResult& result, double tie_tol);

}  // namespace wgf::detail
