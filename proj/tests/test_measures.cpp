#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "test_support.hpp"
#include "wgf/measure.hpp"

using namespace wgf;

TEST_CASE("make_measure basic construction") {
  const auto one_d = make_measure({{0.0}, {1.0}});
  CHECK(one_d.size() == 2);
  CHECK(one_d.dim() == 1);
  CHECK(one_d.coord(1, 0) == 1.0);

  const auto two_d = make_measure({{0.0, 0.0}, {1.0, 10.0}});
  CHECK(two_d.size() == 2);
  CHECK(two_d.dim() == 2);
  CHECK(two_d.coord(1, 1) == 10.0);
}

TEST_CASE("make_measure rejects bad input") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(make_measure({{0.0}, {nan}}), doctest::Contains("NonFiniteCoordinate"),
                       Error);
  CHECK_THROWS_AS(make_measure({}), Error);
  try {
    make_measure({});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyInput);
  }
  try {
    make_measure({{1.0}, {1.0, 2.0}});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
  try {
    make_measure({{0.0}, {std::numeric_limits<double>::infinity()}});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFiniteCoordinate);
  }
}

TEST_CASE("second_moment hand values") {
  CHECK(second_moment(make_measure_1d({0.0})) == 0.0);
  CHECK(second_moment(make_measure_1d({1.0, -2.0})) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(second_moment(make_measure({{3.0, 4.0}})) == doctest::Approx(25.0).epsilon(1e-15));
}

TEST_CASE("random_measure determinism and seed sensitivity") {
  const auto a = random_measure({1, "splitmix64/uniform-v1"}, 3, 2, 1.0);
  const auto b = random_measure({1, "splitmix64/uniform-v1"}, 3, 2, 1.0);
  CHECK(a.coords() == b.coords());

  const auto c = random_measure({2, "splitmix64/uniform-v1"}, 3, 2, 1.0);
  CHECK(a.coords() != c.coords());

  for (double x : a.coords()) CHECK(std::abs(x) <= 1.0);
}

TEST_CASE("random_measure parameter validation") {
  CHECK_THROWS_AS(random_measure({1, "splitmix64/uniform-v1"}, 0, 2, 1.0), Error);
  CHECK_THROWS_AS(random_measure({1, "splitmix64/uniform-v1"}, 2, 0, 1.0), Error);
  CHECK_THROWS_AS(random_measure({1, "splitmix64/uniform-v1"}, 2, 2, 0.0), Error);
  CHECK_THROWS_AS(random_measure({1, "unknown-generator"}, 2, 2, 1.0), Error);
}

TEST_CASE("translate second-moment identity") {
  // second_moment(mu + v) = second_moment(mu) + 2<v, mean> + |v|^2
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto mu = wgft::seeded(seed, 5, 3);
    SplitMix64 rng(seed * 77);
    std::vector<double> v(3);
    for (double& c : v) c = rng.next_in(-2.0, 2.0);

    const auto mean = mean_point(mu);
    double cross = 0.0, vv = 0.0;
    for (int k = 0; k < 3; ++k) {
      cross += v[k] * mean[k];
      vv += v[k] * v[k];
    }
    const double expected = second_moment(mu) + 2.0 * cross + vv;
    CHECK(second_moment(translate(mu, v)) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("order-insensitive equality as measures") {
  const auto mu = wgft::seeded(7, 6, 2);
  CHECK(approx_equal_as_measures(mu, wgft::shuffled(mu, 99)));

  auto coords = mu.coords();
  coords[3] += 1e-4;
  CHECK_FALSE(approx_equal_as_measures(mu, ParticleMeasure(coords, 2), 1e-9));
  CHECK_FALSE(approx_equal_as_measures(mu, wgft::seeded(8, 6, 2)));
  CHECK_FALSE(approx_equal_as_measures(mu, wgft::seeded(7, 6, 3)));
}

TEST_CASE("csv round trip is value exact") {
  const auto mu = wgft::seeded(11, 7, 3, 2.5);
  std::stringstream buffer;
  save_csv(mu, buffer);
  const auto back = load_csv(buffer);
  CHECK(back.dim() == mu.dim());
  CHECK(back.size() == mu.size());
  CHECK(back.coords() == mu.coords());
}

TEST_CASE("csv round trip survives extreme magnitudes") {
  const auto mu = make_measure({{1e-300, -4.9406564584124654e-324},
                                {12345678901234567.0, 6.02214076e23},
                                {-1.7976931348623157e308, 0.0}});
  std::stringstream buffer;
  save_csv(mu, buffer);
  CHECK(load_csv(buffer).coords() == mu.coords());
}

TEST_CASE("csv header and layout") {
  std::stringstream buffer;
  save_csv(make_measure({{0.25, -1.0}, {3.0, 4.5}}), buffer);
  std::string line;
  std::getline(buffer, line);
  CHECK(line == "2,2");
  std::getline(buffer, line);
  CHECK(line == "0.25,-1");
}

TEST_CASE("load_csv rejects malformed input") {
  std::stringstream empty;
  CHECK_THROWS_AS(load_csv(empty), Error);
  std::stringstream truncated("2,3\n1,2\n");
  CHECK_THROWS_AS(load_csv(truncated), Error);
  std::stringstream bad_row("2,1\n1\n");
  CHECK_THROWS_AS(load_csv(bad_row), Error);
}

TEST_CASE("derive_seed produces independent streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 3) == derive_seed(5, 3));
}
