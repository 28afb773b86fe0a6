#include <doctest.h>

#include <random>

#include "rssi/error.hpp"
#include "rssi/metrics.hpp"
#include "support.hpp"

using namespace rssi;

TEST_SUITE("metrics") {

TEST_CASE("hand examples") {
  const std::vector<double> a{1.0, 2.0};
  CHECK(mae(a, a) == 0.0);
  CHECK(mse(a, a) == 0.0);
  const std::vector<double> p{0.0, 5.0};  // errors {1, -3}
  CHECK(mae(a, p) == 2.0);
  CHECK(mse(a, p) == 5.0);
  CHECK(mae(std::vector<double>{-57.12}, std::vector<double>{-60.12}) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(mse(std::vector<double>{2.0}, std::vector<double>{0.0}) == 4.0);
  const auto m = score(a, p);
  CHECK(m.n == 2);
  CHECK(m.mae_db == 2.0);
  CHECK(m.mse_db2 == 5.0);
}

TEST_CASE("errors") {
  const std::vector<double> empty;
  const std::vector<double> one{1.0};
  const std::vector<double> two{1.0, 2.0};
  CHECK_THROWS_AS(mae(empty, empty), Error);
  CHECK_THROWS_AS(mse(one, two), Error);
  try {
    mae(one, two);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::metric);
  }
}

TEST_CASE("properties on random vectors") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(-70.0, 15.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 300;
    std::vector<double> a(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = g(rng);
      p[i] = g(rng);
    }
    const double m1 = mae(a, p), m2 = mse(a, p);
    REQUIRE(m1 * m1 <= m2 * (1 + 1e-12));
    CHECK(oracle::rel_err(m1, oracle::naive_mae(a, p)) <= 1e-12);
    CHECK(oracle::rel_err(m2, oracle::naive_mse(a, p)) <= 1e-12);
    CHECK(mae(p, a) == m1);
    CHECK(mse(p, a) == m2);
    auto as = a, ps = p;
    for (std::size_t i = 0; i < n; ++i) {
      as[i] += 3.0;
      ps[i] += 3.0;
    }
    CHECK(mae(as, ps) == doctest::Approx(m1).epsilon(1e-9));
    CHECK(mse(as, ps) == doctest::Approx(m2).epsilon(1e-9));
  }
}

}  // TEST_SUITE
