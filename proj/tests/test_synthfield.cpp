#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "rssi/dataset.hpp"
#include "rssi/error.hpp"
#include "rssi/synthfield.hpp"

using namespace rssi;

TEST_SUITE("synthfield") {

TEST_CASE("path loss reference points") {
  FieldModel f;
  f.exponent_n = 2.0;
  CHECK(path_loss_rssi(f, f.d0_m) == f.p0_db);
  CHECK(path_loss_rssi(f, 10.0 * f.d0_m) == doctest::Approx(f.p0_db - 20.0).epsilon(1e-12));
  CHECK(path_loss_rssi(f, 100.0 * f.d0_m) == doctest::Approx(f.p0_db - 40.0).epsilon(1e-12));
  CHECK(path_loss_rssi(f, 0.0) == f.p0_db);
  CHECK(eval_field(f, f.tx_lat_e6, f.tx_lon_e6) == f.p0_db);
}

TEST_CASE("field validation") {
  FieldModel f;
  f.d0_m = 0.0;
  CHECK_THROWS_AS(f.validate(), Error);
  f = FieldModel{};
  f.exponent_n = -1.0;
  CHECK_THROWS_AS(f.validate(), Error);
  f = FieldModel{};
  f.shadow_sigma_db = -0.1;
  CHECK_THROWS_AS(f.validate(), Error);
}

TEST_CASE("walk stays inside the radius and is reproducible") {
  const FieldModel f;
  const auto a = generate_walk(f, 10000, 150.0, 7);
  REQUIRE(a.size() == 10000);
  for (const auto& s : a) {
    REQUIRE(s.distance_m <= 150.0);
    REQUIRE(s.latitude_e6 >= 0);
  }
  const auto b = generate_walk(f, 10000, 150.0, 7);
  std::ostringstream oa, ob;
  write_csv(oa, a);
  write_csv(ob, b);
  CHECK(oa.str() == ob.str());
  CHECK_FALSE(generate_walk(f, 100, 150.0, 8) == generate_walk(f, 100, 150.0, 7));
}

TEST_CASE("noise-free walk is monotone in distance") {
  FieldModel f;
  f.shadow_sigma_db = 0.0;
  auto rows = generate_walk(f, 2000, 150.0, 3);
  std::sort(rows.begin(), rows.end(),
            [](const GeoSample& a, const GeoSample& b) { return a.distance_m < b.distance_m; });
  for (std::size_t i = 1; i < rows.size(); ++i) REQUIRE(rows[i].rssi_db <= rows[i - 1].rssi_db);
}

TEST_CASE("default field spans the coverage range") {
  const auto rows = generate_walk(FieldModel{}, 10000, 150.0, 7);
  double lo = 0.0, hi = -200.0;
  for (const auto& s : rows) {
    lo = std::min(lo, s.rssi_db);
    hi = std::max(hi, s.rssi_db);
  }
  CHECK(hi > -50.0);
  CHECK(lo < -90.0);
}

TEST_CASE("shadowing has the configured spread") {
  FieldModel f;
  Rng rng(1);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  const double base = eval_field(f, f.tx_lat_e6 + 300, f.tx_lon_e6);
  for (int i = 0; i < n; ++i) {
    const double e = eval_field(f, f.tx_lat_e6 + 300, f.tx_lon_e6, rng) - base;
    s += e;
    s2 += e * e;
  }
  CHECK(std::abs(s / n) < 0.05);
  CHECK(std::sqrt(s2 / n) == doctest::Approx(4.0).epsilon(0.02));
}

}  // TEST_SUITE
