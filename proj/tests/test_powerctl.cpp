#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rssi/error.hpp"
#include "rssi/linreg.hpp"
#include "rssi/powerctl.hpp"

using namespace rssi;

TEST_SUITE("powerctl") {

TEST_CASE("control_step examples") {
  const ControllerConfig c;
  auto s = control_step(c, -70.0, 10.0);
  CHECK(s.action == Action::raise);
  CHECK(s.tx_db == 11.0);
  s = control_step(c, -35.0, 10.0);
  CHECK(s.action == Action::lower);
  CHECK(s.tx_db == 9.0);
  s = control_step(c, -50.0, 10.0);
  CHECK(s.action == Action::hold);
  CHECK(s.tx_db == 10.0);
  s = control_step(c, -70.0, c.tx_max_db);
  CHECK(s.action == Action::raise);
  CHECK(s.tx_db == c.tx_max_db);
  s = control_step(c, -20.0, c.tx_min_db);
  CHECK(s.tx_db == c.tx_min_db);
  // Thresholds themselves are in band.
  CHECK(control_step(c, -60.0, 0.0).action == Action::hold);
  CHECK(control_step(c, -40.0, 0.0).action == Action::hold);
}

TEST_CASE("config validation") {
  ControllerConfig c;
  c.low_threshold_db = -30.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = ControllerConfig{};
  c.step_db = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = ControllerConfig{};
  c.tx_min_db = 40.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = ControllerConfig{};
  c.period_ms = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("static channel converges in ceil(deficit/step) steps and stays") {
  for (double step : {0.5, 1.0, 3.0, 7.0}) {
    for (double base : {-95.0, -80.0, -61.3, -20.0, -5.5}) {
      ControllerConfig c;
      c.step_db = step;
      c.tx_min_db = -60.0;
      c.tx_max_db = 60.0;
      const std::vector<double> channel(200, base);
      const auto trace = simulate_static(channel, c);
      double deficit = 0.0;
      if (base < c.low_threshold_db) deficit = c.low_threshold_db - base;
      if (base > c.high_threshold_db) deficit = base - c.high_threshold_db;
      const auto need = static_cast<std::size_t>(std::ceil(deficit / step));
      // Step k (0-based) measures with the tx set after k adjustments.
      for (std::size_t k = need; k < trace.steps.size(); ++k) {
        const double rx = trace.steps[k].rx_rssi_db;
        REQUIRE(rx >= c.low_threshold_db);
        REQUIRE(rx <= c.high_threshold_db);
      }
      if (need > 0) CHECK(trace.steps[need - 1].action != Action::hold);
    }
  }
}

TEST_CASE("in-band receiver only holds") {
  const std::vector<double> channel(50, -50.0);
  const auto t = simulate_static(channel, ControllerConfig{});
  for (const auto& s : t.steps) {
    CHECK(s.action == Action::hold);
    CHECK(s.tx_power_db == 0.0);
  }
}

TEST_CASE("actuator bounds hold on random walks") {
  const FieldModel field;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ControllerConfig c;
    c.step_db = 0.5 + static_cast<double>(seed % 5);
    const auto walk = random_walk(field, 300, 150.0, seed);
    const auto t = simulate_loop(field, walk, c, seed);
    REQUIRE(t.steps.size() == walk.size());
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      REQUIRE(t.steps[i].tx_power_db >= c.tx_min_db);
      REQUIRE(t.steps[i].tx_power_db <= c.tx_max_db);
      REQUIRE(t.steps[i].t_ms == static_cast<std::int64_t>(i) * c.period_ms);
    }
  }
}

TEST_CASE("received power follows tx power") {
  const FieldModel field;
  const auto walk = random_walk(field, 50, 150.0, 2);
  ControllerConfig c;
  c.reference_tx_db = 5.0;
  c.initial_tx_db = 12.0;
  FieldModel quiet = field;
  quiet.shadow_sigma_db = 0.0;
  const auto t = simulate_loop(quiet, walk, c, 1);
  CHECK(t.steps[0].rx_rssi_db == doctest::Approx(eval_field(quiet, walk[0].lat_e6, walk[0].lon_e6) + 7.0));
  for (std::size_t i = 1; i < t.steps.size(); ++i) {
    const double base = eval_field(quiet, walk[i].lat_e6, walk[i].lon_e6);
    CHECK(t.steps[i].rx_rssi_db ==
          doctest::Approx(base + t.steps[i - 1].tx_power_db - c.reference_tx_db));
  }
  const auto again = simulate_loop(field, walk, c, 9);
  const auto same = simulate_loop(field, walk, c, 9);
  CHECK(again.steps.size() == same.steps.size());
  for (std::size_t i = 0; i < again.steps.size(); ++i) {
    CHECK(again.steps[i].rx_rssi_db == same.steps[i].rx_rssi_db);
  }
}

TEST_CASE("regressor channel and csv") {
  const LinearModel flat({0.0, 0.0, 0.0}, -75.0);
  const FieldModel field;
  const auto walk = random_walk(field, 30, 100.0, 3);
  const auto t = simulate_loop(flat, walk, ControllerConfig{}, field.site());
  CHECK(t.steps.back().rx_rssi_db >= -60.0);
  std::ostringstream out;
  write_trace_csv(out, t);
  CHECK(out.str().rfind("t_ms,rssi_db,action,tx_db\n0,-75,raise,1\n100,-74,raise,2\n", 0) == 0);
  CHECK_THROWS_AS(simulate_loop(flat, std::vector<WalkPoint>{}, ControllerConfig{}, field.site()),
                  Error);
}

}  // TEST_SUITE
