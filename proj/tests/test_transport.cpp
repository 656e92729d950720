#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "test_support.hpp"
#include "wgf/transport.hpp"

using namespace wgf;

namespace {

std::vector<int> identity_perm(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return p;
}

// Matched point pairs as an order-independent set.
std::set<std::pair<std::vector<double>, std::vector<double>>> matching_pairs(
    const TransportMap& map) {
  std::set<std::pair<std::vector<double>, std::vector<double>>> pairs;
  for (int i = 0; i < map.source.size(); ++i) {
    const auto x = map.source.point(i);
    const auto y = map.target.point(map.assignment[i]);
    pairs.insert({{x.begin(), x.end()}, {y.begin(), y.end()}});
  }
  return pairs;
}

}  // namespace

TEST_CASE("optimal_map identity case") {
  const auto mu = wgft::seeded(3, 5, 2);
  const auto map = optimal_map(mu, mu);
  CHECK(map.assignment == identity_perm(5));
  CHECK(map.cost == 0.0);
  CHECK(map.w2() == 0.0);
}

TEST_CASE("optimal_map monotone pair in 1d") {
  const auto mu = make_measure_1d({0.0, 1.0});
  const auto nu = make_measure_1d({0.5, 1.5});
  const auto map = optimal_map(mu, nu);
  CHECK(map.assignment == identity_perm(2));
  CHECK(wasserstein_distance(mu, nu) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("optimal_map prefers identity pairing on the planar instance") {
  const auto mu = make_measure({{0.0, 0.0}, {1.0, 10.0}});
  const auto nu = make_measure({{0.0, 0.0}, {-1.0, 9.0}});
  const auto map = optimal_map(mu, nu);
  CHECK(map.assignment == identity_perm(2));
  CHECK(map.cost / 2.0 == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("wasserstein distance examples") {
  const auto mu = make_measure({{0.0, 0.0}, {1.0, 0.0}});
  const auto nu = make_measure({{0.0, 1.0}, {1.0, 1.0}});
  CHECK(wasserstein_distance(mu, nu) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("size and dimension mismatches are rejected") {
  const auto mu = wgft::seeded(1, 3, 2);
  CHECK_THROWS_AS(optimal_map(mu, wgft::seeded(2, 4, 2)), Error);
  CHECK_THROWS_AS(optimal_map(mu, wgft::seeded(2, 3, 3)), Error);
}

TEST_CASE("brute force oracle equals solver on seeded instances") {
  // Oracle equivalence over every size the oracle supports.
  for (std::uint64_t seed = 1; seed <= 40; ++seed)
    for (int n = 1; n <= 7; ++n)
      for (int d = 1; d <= 3; ++d) {
        const auto mu = wgft::seeded(derive_seed(seed, 101 + n), n, d);
        const auto nu = wgft::seeded(derive_seed(seed, 202 + d), n, d);
        const auto fast = optimal_map(mu, nu);
        const auto oracle = brute_force_map(mu, nu);
        CHECK(fast.cost == oracle.cost);
        CHECK(fast.assignment == oracle.assignment);
      }
}

TEST_CASE("brute force size limits") {
  const auto mu = wgft::seeded(1, 1, 1);
  CHECK(brute_force_map(mu, mu).assignment == identity_perm(1));
  const auto big_mu = wgft::seeded(1, 10, 2);
  const auto big_nu = wgft::seeded(2, 10, 2);
  CHECK_THROWS_AS(brute_force_map(big_mu, big_nu), Error);
  try {
    brute_force_map(big_mu, big_nu);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooLarge);
  }
}

TEST_CASE("cost ties resolve to the lexicographically smallest permutation") {
  // Two assignments with identical total cost.
  const auto mu = make_measure_1d({0.0, 2.0});
  const auto nu = make_measure_1d({1.0, 1.0});
  CHECK(optimal_map(mu, nu).assignment == identity_perm(2));
  CHECK(brute_force_map(mu, nu).assignment == identity_perm(2));

  // Fully degenerate: every permutation ties.
  const auto src = make_measure({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}});
  const auto dst = make_measure({{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}});
  CHECK(optimal_map(src, dst).assignment == identity_perm(3));
  CHECK(brute_force_map(src, dst).assignment == identity_perm(3));
}

TEST_CASE("assignment gap detects ties and near-unique optima") {
  const auto mu = make_measure_1d({0.0, 2.0});
  const auto nu = make_measure_1d({1.0, 1.0});
  CHECK(assignment_cost_gap(mu, nu) <= kTieTolerance);

  const auto a = wgft::seeded(5, 6, 2);
  const auto b = wgft::seeded(6, 6, 2);
  CHECK(assignment_cost_gap(a, b) > kTieTolerance);

  // Gap equals second-best minus best; verify against the oracle.
  const auto c = wgft::seeded(7, 5, 2);
  const auto d = wgft::seeded(8, 5, 2);
  const auto best = brute_force_map(c, d);
  double second = std::numeric_limits<double>::infinity();
  std::vector<int> perm = identity_perm(5);
  do {
    if (perm == best.assignment) continue;
    second = std::min(second, pairing_cost(c, d, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(assignment_cost_gap(c, d) ==
        doctest::Approx(second - best.cost).epsilon(1e-9));
}

TEST_CASE("lattice instances with many exact ties follow the oracle tie-break") {
  // Integer grids generate plenty of exactly tied assignments.
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    SplitMix64 rng(seed);
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);
    std::vector<double> a, b;
    for (int i = 0; i < 2 * n; ++i) {
      a.push_back(static_cast<double>(rng.next_u64() % 3));
      b.push_back(static_cast<double>(rng.next_u64() % 3));
    }
    const ParticleMeasure mu(a, 2), nu(b, 2);
    const auto fast = optimal_map(mu, nu);
    const auto oracle = brute_force_map(mu, nu);
    CHECK(fast.cost == oracle.cost);
    CHECK(fast.assignment == oracle.assignment);
  }
}

TEST_CASE("full-length cyclical monotonicity characterizes optimality") {
  // A strictly suboptimal pairing always contains an improving cycle.
  SplitMix64 rng(123);
  int found = 0;
  for (std::uint64_t seed = 1; found < 25; ++seed) {
    const int n = 3 + static_cast<int>(seed % 4);
    const auto mu = wgft::seeded(derive_seed(seed, 61), n, 2);
    const auto nu = wgft::seeded(derive_seed(seed, 62), n, 2);
    const auto best = optimal_map(mu, nu);

    std::vector<int> perm = best.assignment;
    const int i = static_cast<int>(rng.next_u64() % n);
    const int j = static_cast<int>(rng.next_u64() % n);
    if (i == j) continue;
    std::swap(perm[i], perm[j]);
    const double cost = pairing_cost(mu, nu, perm);
    if (cost <= best.cost + kTieTolerance) continue;
    TransportMap worse{mu, nu, perm, cost};
    CHECK_FALSE(is_cyclically_monotone(worse, n));
    ++found;
  }
}

TEST_CASE("metric axioms on seeded samples") {
  // Symmetry.
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto mu = wgft::seeded(derive_seed(seed, 1), 6, 2);
    const auto nu = wgft::seeded(derive_seed(seed, 2), 6, 2);
    CHECK(std::abs(wasserstein_distance(mu, nu) - wasserstein_distance(nu, mu)) <= 1e-12);
  }
  // Triangle inequality over 1000 seeded triples.
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 1000; ++seed) {
    const int n = 2 + static_cast<int>(seed % 6);
    const int d = 1 + static_cast<int>(seed % 3);
    const auto mu = wgft::seeded(derive_seed(seed, 11), n, d);
    const auto nu = wgft::seeded(derive_seed(seed, 12), n, d);
    const auto rho = wgft::seeded(derive_seed(seed, 13), n, d);
    CHECK(wasserstein_distance(mu, rho) <=
          wasserstein_distance(mu, nu) + wasserstein_distance(nu, rho) + 1e-9);
    ++checked;
  }
}

TEST_CASE("permutation invariance of the matching") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto mu = wgft::seeded(derive_seed(seed, 21), 6, 3);
    const auto nu = wgft::seeded(derive_seed(seed, 22), 6, 3);
    const auto mu_shuffled = wgft::shuffled(mu, seed * 3 + 1);
    const auto nu_shuffled = wgft::shuffled(nu, seed * 5 + 2);

    const auto base = optimal_map(mu, nu);
    const auto mixed = optimal_map(mu_shuffled, nu_shuffled);
    CHECK(std::abs(base.w2() - mixed.w2()) <= 1e-12);
    CHECK(matching_pairs(base) == matching_pairs(mixed));
  }
}

TEST_CASE("cyclical monotonicity") {
  const auto mu = make_measure_1d({0.0, 1.0});
  const auto nu = make_measure_1d({0.5, 1.5});

  const auto identity_map = optimal_map(mu, mu);
  CHECK(is_cyclically_monotone(identity_map, 2));

  TransportMap swapped{mu, nu, {1, 0}, pairing_cost(mu, nu, {1, 0})};
  CHECK_FALSE(is_cyclically_monotone(swapped, 2));

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int n = 3 + static_cast<int>(seed % 5);
    const auto a = wgft::seeded(derive_seed(seed, 31), n, 2);
    const auto b = wgft::seeded(derive_seed(seed, 32), n, 2);
    CHECK(is_cyclically_monotone(optimal_map(a, b), n));
  }

  CHECK_THROWS_AS(is_cyclically_monotone(identity_map, 1), Error);
}

TEST_CASE("compose_inverse") {
  const auto mu = wgft::seeded(41, 5, 2);
  const auto nu = wgft::seeded(42, 5, 2);

  const auto identity_map = optimal_map(mu, mu);
  CHECK(compose_inverse(identity_map).assignment == identity_perm(5));

  const auto forward = optimal_map(mu, nu);
  const auto inverse = compose_inverse(forward);
  for (int i = 0; i < 5; ++i) CHECK(inverse.assignment[forward.assignment[i]] == i);
  CHECK(inverse.assignment == optimal_map(nu, mu).assignment);

  // Cost ties make the inverse ill-defined.
  const auto tied_src = make_measure_1d({0.0, 2.0});
  const auto tied_dst = make_measure_1d({1.0, 1.0});
  CHECK_THROWS_AS(compose_inverse(optimal_map(tied_src, tied_dst)), Error);
}

TEST_CASE("plan induced by a permutation map") {
  const auto mu = wgft::seeded(51, 4, 2);
  const auto nu = wgft::seeded(52, 4, 2);
  const auto plan = plan_from_map(optimal_map(mu, nu));
  CHECK(plan.pairs.size() == 4);
  std::vector<double> row(4, 0.0), col(4, 0.0);
  for (const auto& p : plan.pairs) {
    CHECK(p.mass == 0.25);
    row[p.i] += p.mass;
    col[p.j] += p.mass;
  }
  for (int i = 0; i < 4; ++i) {
    CHECK(row[i] == doctest::Approx(0.25));
    CHECK(col[i] == doctest::Approx(0.25));
  }
}

TEST_CASE("coincident points are handled without division") {
  const auto mu = make_measure({{1.0, 1.0}, {1.0, 1.0}, {2.0, 0.0}});
  const auto nu = make_measure({{1.0, 1.0}, {3.0, 0.0}, {1.0, 1.0}});
  const auto map = optimal_map(mu, nu);
  CHECK(map.cost == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::isfinite(map.w2()));
}
