#include "wgf/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wgf/assignment.hpp"

namespace wgf {

namespace {

double sq_dist(const ParticleMeasure& mu, int i, const ParticleMeasure& nu, int j) {
  double s = 0.0;
  for (int k = 0; k < mu.dim(); ++k) {
    const double dx = mu.coord(i, k) - nu.coord(j, k);
    s += dx * dx;
  }
  return s;
}

void require_compatible(const ParticleMeasure& mu, const ParticleMeasure& nu) {
  if (mu.dim() != nu.dim()) raise(ErrorKind::DimensionMismatch, "measures live in different dimensions");
  if (mu.size() != nu.size()) raise(ErrorKind::SizeMismatch, "measures have different atom counts");
}

std::vector<double> cost_matrix(const ParticleMeasure& mu, const ParticleMeasure& nu) {
  const int n = mu.size();
  std::vector<double> cost(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost[static_cast<std::size_t>(i) * n + j] = sq_dist(mu, i, nu, j);
  return cost;
}

// True when some non-matched pair has reduced cost <= tol; only then can a
// cost tie exist, so the exact cycle search can be skipped otherwise.
bool tie_possible(const std::vector<double>& cost, int n, const detail::AssignmentResult& r,
                  double tol) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == r.row_to_col[i]) continue;
      const double rc = cost[static_cast<std::size_t>(i) * n + j] - r.row_dual[i] - r.col_dual[j];
      if (rc <= tol) return true;
    }
  return false;
}

}  // namespace

double TransportMap::w2() const { return std::sqrt(cost / source.size()); }

TransportPlan plan_from_map(const TransportMap& map) {
  TransportPlan plan{map.source, map.target, {}};
  const double mass = 1.0 / map.source.size();
  plan.pairs.reserve(map.assignment.size());
  for (int i = 0; i < static_cast<int>(map.assignment.size()); ++i)
    plan.pairs.push_back({i, map.assignment[i], mass});
  return plan;
}

double pairing_cost(const ParticleMeasure& mu, const ParticleMeasure& nu,
                    const std::vector<int>& assignment) {
  require_compatible(mu, nu);
  double total = 0.0;
  for (int i = 0; i < mu.size(); ++i) total += sq_dist(mu, i, nu, assignment[i]);
  return total;
}

TransportMap optimal_map(const ParticleMeasure& mu, const ParticleMeasure& nu) {
  require_compatible(mu, nu);
  const int n = mu.size();
  const auto cost = cost_matrix(mu, nu);
  auto solved = detail::solve_assignment(cost, n);
  std::vector<int> sigma = solved.row_to_col;
  if (n > 1 && tie_possible(cost, n, solved, kTieTolerance) &&
      detail::assignment_gap(cost, n, solved) <= kTieTolerance) {
    sigma = detail::lexicographic_min_assignment(cost, n, solved, kTieTolerance);
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += cost[static_cast<std::size_t>(i) * n + sigma[i]];
  return TransportMap{mu, nu, std::move(sigma), total};
}

double assignment_cost_gap(const ParticleMeasure& mu, const ParticleMeasure& nu) {
  require_compatible(mu, nu);
  const int n = mu.size();
  if (n == 1) return std::numeric_limits<double>::infinity();
  const auto cost = cost_matrix(mu, nu);
  const auto solved = detail::solve_assignment(cost, n);
  return detail::assignment_gap(cost, n, solved);
}

TransportMap unique_optimal_map(const ParticleMeasure& mu, const ParticleMeasure& nu) {
  require_compatible(mu, nu);
  const int n = mu.size();
  const auto cost = cost_matrix(mu, nu);
  auto solved = detail::solve_assignment(cost, n);
  if (n > 1 && tie_possible(cost, n, solved, kTieTolerance) &&
      detail::assignment_gap(cost, n, solved) <= kTieTolerance)
    raise(ErrorKind::NonUniqueOptimum, "optimal assignment has a cost tie");
  return TransportMap{mu, nu, std::move(solved.row_to_col), solved.cost};
}

double wasserstein_distance(const ParticleMeasure& mu, const ParticleMeasure& nu) {
  return optimal_map(mu, nu).w2();
}

TransportMap brute_force_map(const ParticleMeasure& mu, const ParticleMeasure& nu) {
  require_compatible(mu, nu);
  const int n = mu.size();
  if (n > kBruteForceMaxAtoms) raise(ErrorKind::TooLarge, "brute force capped at 9 atoms");
  const auto cost = cost_matrix(mu, nu);

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  auto total_of = [&](const std::vector<int>& p) {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += cost[static_cast<std::size_t>(i) * n + p[i]];
    return t;
  };

  // Pass 1: exact minimum. Pass 2: first (lexicographically smallest)
  // permutation within the tie tolerance of that minimum.
  double best = std::numeric_limits<double>::infinity();
  do {
    best = std::min(best, total_of(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::iota(perm.begin(), perm.end(), 0);
  do {
    const double t = total_of(perm);
    if (t <= best + kTieTolerance) return TransportMap{mu, nu, perm, t};
  } while (std::next_permutation(perm.begin(), perm.end()));
  raise(ErrorKind::NoConvergence, "unreachable: no permutation matched the minimum");
}

bool is_cyclically_monotone(const TransportMap& map, int cycle_length_max) {
  if (cycle_length_max < 2) raise(ErrorKind::InvalidParameter, "cycle length must be >= 2");
  const int n = map.source.size();
  const int d = map.source.dim();
  const int max_len = std::min(cycle_length_max, n);
  constexpr double kSlack = -1e-10;

  // <x_a - x_b, y_{sigma(a)}> accumulated along the cycle.
  auto pair_term = [&](int a, int b) {
    double s = 0.0;
    for (int k = 0; k < d; ++k)
      s += (map.source.coord(a, k) - map.source.coord(b, k)) *
           map.target.coord(map.assignment[a], k);
    return s;
  };

  // Enumerate cycles with the smallest index first so each cyclic class is
  // visited once.
  std::vector<int> cycle;
  std::vector<char> used(n, 0);
  bool monotone = true;

  auto extend = [&](auto&& self, int first) -> void {
    if (!monotone) return;
    const int len = static_cast<int>(cycle.size());
    if (len >= 2) {
      double total = 0.0;
      for (int k = 0; k < len; ++k) total += pair_term(cycle[k], cycle[(k + 1) % len]);
      if (total < kSlack) {
        monotone = false;
        return;
      }
    }
    if (len == max_len) return;
    for (int next = first + 1; next < n; ++next) {
      if (used[next]) continue;
      used[next] = 1;
      cycle.push_back(next);
      self(self, first);
      cycle.pop_back();
      used[next] = 0;
      if (!monotone) return;
    }
  };

  for (int first = 0; first < n && monotone; ++first) {
    used.assign(n, 0);
    used[first] = 1;
    cycle.assign(1, first);
    extend(extend, first);
  }
  return monotone;
}

TransportMap compose_inverse(const TransportMap& map) {
  if (assignment_cost_gap(map.source, map.target) <= kTieTolerance)
    raise(ErrorKind::NonUniqueOptimum, "inverse undefined under a cost tie");
  const int n = map.source.size();
  std::vector<int> inverse(n);
  for (int i = 0; i < n; ++i) inverse[map.assignment[i]] = i;
  return TransportMap{map.target, map.source, std::move(inverse), map.cost};
}

}  // namespace wgf
