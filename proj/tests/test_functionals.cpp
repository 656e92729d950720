#include <doctest.h>

#include <cmath>
#include <vector>

#include "test_support.hpp"
#include "wgf/functional.hpp"
#include "wgf/geometry.hpp"
#include "wgf/transport.hpp"

using namespace wgf;

namespace {

const ParticleMeasure kOmega = make_measure({{0.0, 0.0}, {1.0, 0.0}});
const ParticleMeasure kMu0 = make_measure({{0.0, 0.0}, {1.0, 10.0}});
const ParticleMeasure kMu1 = make_measure({{0.0, 0.0}, {-1.0, 9.0}});

std::vector<Functional> shipped_functionals() {
  return {Functional::potential_quadratic(), Functional::potential_cosine(),
          Functional::interaction_quadratic(),
          Functional::sum({Functional::potential_quadratic(), Functional::potential_cosine()})};
}

ParticleMeasure push_along(const ParticleMeasure& mu, const std::vector<double>& field,
                           double eps) {
  auto coords = mu.coords();
  for (std::size_t a = 0; a < coords.size(); ++a) coords[a] += eps * field[a];
  return ParticleMeasure(coords, mu.dim());
}

}  // namespace

TEST_CASE("energy hand values") {
  CHECK(energy(Functional::zero(), wgft::seeded(1, 4, 2)) == 0.0);
  CHECK(energy(Functional::potential_quadratic(), make_measure_1d({1.0, -2.0})) ==
        doctest::Approx(1.25).epsilon(1e-15));
  CHECK(energy(Functional::interaction_quadratic(), make_measure_1d({0.0, 2.0})) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(energy(Functional::potential_cosine(), make_measure_1d({0.0})) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("strong subdifferential hand values") {
  const auto zero_field = strong_subdifferential(Functional::zero(), wgft::seeded(1, 3, 2));
  for (double v : zero_field.vectors) CHECK(v == 0.0);

  const auto quad = strong_subdifferential(Functional::potential_quadratic(),
                                           make_measure_1d({2.0}));
  CHECK(quad.vectors[0] == doctest::Approx(2.0).epsilon(1e-15));

  const auto inter = strong_subdifferential(Functional::interaction_quadratic(),
                                            make_measure_1d({0.5, 1.5}));
  CHECK(inter.vectors[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(inter.vectors[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("metric slope hand values") {
  CHECK(metric_slope(Functional::zero(), wgft::seeded(2, 3, 2)) == 0.0);
  CHECK(metric_slope(Functional::potential_quadratic(), make_measure_1d({1.0})) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(metric_slope(Functional::potential_quadratic(), make_measure_1d({1.0, -2.0})) ==
        doctest::Approx(std::sqrt(2.5)).epsilon(1e-15));
}

TEST_CASE("lambda accounting") {
  CHECK(Functional::potential_quadratic().lambda() == 1.0);
  CHECK(Functional::potential_cosine().lambda() == -1.0);
  CHECK(Functional::interaction_quadratic().lambda() == 0.0);
  CHECK(Functional::sum({Functional::potential_quadratic(), Functional::potential_cosine()})
            .lambda() == 0.0);
  CHECK(Functional::potential_cosine().lambda_minus() == 1.0);
  CHECK(Functional::potential_quadratic().lambda_minus() == 0.0);
}

TEST_CASE("functional parsing and ids") {
  CHECK(parse_functional("zero").is_zero());
  CHECK(parse_functional("potential:quadratic").id() == "potential:quadratic");
  CHECK(parse_functional("potential:quadratic@2").lambda() == 2.0);
  CHECK(parse_functional("sum:[potential:quadratic,potential:cosine]").id() ==
        "sum:[potential:quadratic,potential:cosine]");
  CHECK(parse_functional(" potential:cosine ").id() == "potential:cosine");

  CHECK_THROWS_AS(parse_functional("potential:unknown"), Error);
  CHECK_THROWS_AS(parse_functional("sum:["), Error);
  CHECK_THROWS_AS(parse_functional("sum:[]"), Error);
  CHECK_THROWS_AS(parse_functional("potential:quadratic@-1"), Error);
  CHECK_THROWS_AS(parse_functional("potential:quadratic@x"), Error);
}

TEST_CASE("subdifferential inequality is tight for the quadratic potential") {
  const auto E = Functional::potential_quadratic();
  const auto mu = make_measure_1d({1.0});
  const auto xi = strong_subdifferential(E, mu);

  std::vector<ParticleMeasure> probes;
  for (double y : {-2.0, -0.5, 0.0, 0.9, 1.0, 1.4, 3.0}) probes.push_back(make_measure_1d({y}));
  const double worst = check_subdifferential(E, mu, xi, probes);
  CHECK(std::abs(worst) <= 1e-12);  // quadratic tightness: slack identically zero
}

TEST_CASE("probe with itself gives zero slack") {
  const auto E = Functional::potential_cosine();
  const auto mu = wgft::seeded(5, 4, 2);
  const auto xi = strong_subdifferential(E, mu);
  CHECK(std::abs(check_subdifferential(E, mu, xi, {mu})) <= 1e-12);
}

TEST_CASE("scaled gradients are rejected as subdifferentials") {
  const auto E = Functional::potential_quadratic();
  const auto mu = wgft::seeded(6, 5, 2);
  auto xi = strong_subdifferential(E, mu);
  for (double& v : xi.vectors) v *= 2.0;

  std::vector<ParticleMeasure> probes;
  const auto field = strong_subdifferential(E, mu).vectors;
  for (double eps : {1e-3, 1e-2, 0.1}) probes.push_back(push_along(mu, field, eps));
  CHECK(check_subdifferential(E, mu, xi, probes) < -1e-9);
}

TEST_CASE("strong subdifferential inequality over random perturbations") {
  for (const auto& E : shipped_functionals()) {
    const auto mu = wgft::seeded(7, 5, 2);
    const auto xi = strong_subdifferential(E, mu);
    const double lambda = E.lambda();
    const double e_mu = energy(E, mu);
    SplitMix64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> t(mu.coords().size());
      for (double& v : t) v = rng.next_in(-0.5, 0.5);
      const auto nu = push_along(mu, t, 1.0);
      double inner = 0.0, norm_sq = 0.0;
      for (std::size_t a = 0; a < t.size(); ++a) {
        inner += xi.vectors[a] * t[a];
        norm_sq += t[a] * t[a];
      }
      inner /= mu.size();
      norm_sq /= mu.size();
      const double slack = energy(E, nu) - e_mu - inner - 0.5 * lambda * norm_sq;
      CHECK(slack >= -1e-9);
    }
  }
}

TEST_CASE("W2-squared subdifferential identity") {
  const auto omega = wgft::seeded(8, 5, 2);
  const auto mu = wgft::seeded(9, 5, 2);
  CHECK(std::abs(check_w2_squared_subdifferential(omega, mu, {mu})) <= 1e-12);

  std::vector<ParticleMeasure> probes;
  for (std::uint64_t s = 20; s < 30; ++s) probes.push_back(wgft::seeded(s, 5, 2));
  CHECK(std::abs(check_w2_squared_subdifferential(omega, mu, probes)) <= 1e-9);

  // The strict-gap geometry instance.
  CHECK(std::abs(check_w2_squared_subdifferential(kOmega, kMu0, {kMu1})) <= 1e-9);
}

TEST_CASE("compose_to_base reindexes through the optimal map") {
  const auto E = Functional::potential_quadratic();
  const auto mu = wgft::seeded(10, 5, 2);
  const auto xi = strong_subdifferential(E, mu);

  const auto same = compose_to_base(xi, mu);
  CHECK(same.vectors == xi.vectors);

  const auto omega = wgft::seeded(11, 5, 2);
  const auto eta = compose_to_base(xi, omega);
  const auto map = unique_optimal_map(omega, mu);
  for (int i = 0; i < 5; ++i)
    for (int k = 0; k < 2; ++k)
      CHECK(eta.vectors[i * 2 + k] == xi.vectors[map.assignment[i] * 2 + k]);
}

TEST_CASE("base subdifferential inequality holds for composed fields") {
  const auto omega = wgft::seeded(12, 5, 2);
  std::vector<ParticleMeasure> probes;
  for (std::uint64_t s = 40; s < 90; ++s) probes.push_back(wgft::seeded(s, 5, 2));

  for (const auto& E :
       {Functional::potential_quadratic(), Functional::interaction_quadratic()}) {
    const auto mu = wgft::seeded(13, 5, 2);
    const auto eta = compose_to_base(strong_subdifferential(E, mu), omega);
    CHECK(check_subdifferential_in_base(E, omega, mu, eta, probes) >= -1e-9);
  }
}

TEST_CASE("gradient matches finite differences of the energy") {
  for (const auto& E : shipped_functionals()) {
    const auto mu = wgft::seeded(14, 4, 3);
    const auto xi = strong_subdifferential(E, mu);
    const double h = 1e-6;
    for (int i = 0; i < mu.size(); ++i)
      for (int k = 0; k < mu.dim(); ++k) {
        auto plus = mu.coords();
        auto minus = mu.coords();
        plus[i * 3 + k] += h;
        minus[i * 3 + k] -= h;
        // d/dx_{ik} E = xi_{ik} / N for these uniform-mass energies.
        const double fd = (energy_raw(E, plus, 4, 3) - energy_raw(E, minus, 4, 3)) / (2.0 * h);
        const double expected = xi.vectors[i * 3 + k] / mu.size();
        CHECK(fd == doctest::Approx(expected).epsilon(1e-6));
      }
  }
}

TEST_CASE("lambda convexity along generalized geodesics") {
  for (const auto& E : shipped_functionals()) {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      const auto omega = wgft::seeded(derive_seed(seed, 151), 5, 2);
      const auto mu0 = wgft::seeded(derive_seed(seed, 152), 5, 2);
      const auto mu1 = wgft::seeded(derive_seed(seed, 153), 5, 2);
      const auto plan = make_based_plan(omega, mu0, mu1);
      const double pseudo = pseudo_metric(plan);
      SplitMix64 rng(seed);
      const double alpha = rng.next_unit();
      const auto mid = generalized_geodesic(plan, alpha).measure;
      const double bound = (1.0 - alpha) * energy(E, mu0) + alpha * energy(E, mu1) -
                           alpha * (1.0 - alpha) * 0.5 * E.lambda() * pseudo * pseudo;
      CHECK(energy(E, mid) <= bound + 1e-9);
    }
  }
}

TEST_CASE("metric slope agrees with the shrinking-perturbation estimate") {
  for (const auto& E : shipped_functionals()) {
    const auto mu = wgft::seeded(15, 5, 2);
    const double slope = metric_slope(E, mu);
    if (slope < 1e-9) continue;
    const auto xi = strong_subdifferential(E, mu);

    // Steepest direction: push through id - eps * xi.
    double best = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      std::vector<double> downhill(xi.vectors.size());
      for (std::size_t a = 0; a < downhill.size(); ++a) downhill[a] = -xi.vectors[a];
      const auto nu = push_along(mu, downhill, eps);
      const double drop = energy(E, mu) - energy(E, nu);
      const double dist = wasserstein_distance(mu, nu);
      if (drop > 0.0 && dist > 0.0) best = std::max(best, drop / dist);
    }
    CHECK(best == doctest::Approx(slope).epsilon(0.05));
  }
}

TEST_CASE("declared lambda is a global Hessian lower bound (finite differences)") {
  const double h = 1e-4;  // balances truncation against round-off in the second difference
  SplitMix64 rng(77);
  for (const auto& [spec, lambda] :
       std::vector<std::pair<std::string, double>>{{"potential:quadratic", 1.0},
                                                   {"potential:cosine", -1.0},
                                                   {"sum:[potential:quadratic,potential:cosine]",
                                                    0.0}}) {
    const auto E = parse_functional(spec);
    for (int trial = 0; trial < 25; ++trial) {
      const int d = 2;
      std::vector<double> x(d), u(d);
      for (double& c : x) c = rng.next_in(-3.0, 3.0);
      double norm = 0.0;
      for (double& c : u) {
        c = rng.next_in(-1.0, 1.0);
        norm += c * c;
      }
      norm = std::sqrt(norm);
      for (double& c : u) c /= norm;

      auto shift = [&](double s) {
        std::vector<double> y(d);
        for (int k = 0; k < d; ++k) y[k] = x[k] + s * u[k];
        return energy_raw(E, y, 1, d);  // one-atom energy equals V
      };
      const double second = (shift(h) - 2.0 * shift(0.0) + shift(-h)) / (h * h);
      CHECK(second >= lambda - 1e-6);
    }
  }
  // Quadratic kernel: W(z) = 4 * E({x, x - z}) for the two-atom measure.
  const auto W = Functional::interaction_quadratic();
  for (int trial = 0; trial < 10; ++trial) {
    const double z = rng.next_in(-3.0, 3.0);
    auto kernel = [&](double s) {
      return 4.0 * energy_raw(W, std::vector<double>{0.0, -(z + s)}, 2, 1);
    };
    const double second = (kernel(h) - 2.0 * kernel(0.0) + kernel(-h)) / (h * h);
    CHECK(second >= -1e-6);
  }
}

TEST_CASE("functional infimum") {
  CHECK(functional_infimum(Functional::potential_quadratic(), 2) == 0.0);
  CHECK(functional_infimum(Functional::interaction_quadratic(), 3) == 0.0);
  CHECK(functional_infimum(Functional::zero(), 1) == 0.0);
  // V(x) = |x|^2 + cos(x_1) has its minimum 1 at the origin.
  const auto stiff = parse_functional("sum:[potential:quadratic@2,potential:cosine]");
  CHECK(functional_infimum(stiff, 2) == doctest::Approx(1.0).epsilon(1e-12));
}
