#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rssi/error.hpp"
#include "rssi/fieldmap.hpp"
#include "rssi/linreg.hpp"
#include "rssi/models.hpp"
#include "support.hpp"

using namespace rssi;

namespace {

const GridBounds kBox{21005000, 21005800, 105842500, 105843300};

}  // namespace

TEST_SUITE("fieldmap") {

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(HeatmapGrid(kBox, 1, 2, {1, 2}), Error);
  CHECK_THROWS_AS(HeatmapGrid(kBox, 2, 2, {1, 2, 3}), Error);
  CHECK_THROWS_AS(HeatmapGrid(GridBounds{5, 5, 1, 2}, 2, 2, {1, 2, 3, 4}), Error);
}

TEST_CASE("cell centres") {
  const GridBounds b{0, 100, 0, 100};
  const auto nw = cell_center(b, 2, 2, 0, 0);
  CHECK(nw.lat_e6 == 75);
  CHECK(nw.lon_e6 == 25);
  const auto se = cell_center(b, 2, 2, 1, 1);
  CHECK(se.lat_e6 == 25);
  CHECK(se.lon_e6 == 75);
}

TEST_CASE("constant model fills the grid") {
  const LinearModel c({0.0, 0.0}, -66.0);
  const auto g = predict_grid(c, kBox, 2, 2, std::nullopt);
  REQUIRE(g.values().size() == 4);
  for (double v : g.values()) CHECK(v == -66.0);
}

TEST_CASE("distance models need the transmitter") {
  const LinearModel c({0.0, 0.0, 1.0}, 0.0);
  try {
    predict_grid(c, kBox, 4, 4, std::nullopt);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::grid);
  }
  const TxSite tx{21005400, 105842900, 0.111};
  const auto g = predict_grid(c, kBox, 4, 4, tx);
  const auto p = cell_center(kBox, 4, 4, 2, 3);
  CHECK(g.at(2, 3) == distance_m(tx, p.lat_e6, p.lon_e6));
}

TEST_CASE("parallel grid matches the serial one") {
  const auto d = oracle::random_dataset(300, 3, 1, 0.3);
  ForestParams p;
  p.n_trees = 20;
  const auto f = fit_forest(d, p);
  const TxSite tx{21005400, 105842900, 0.111};
  CHECK(predict_grid(f, kBox, 30, 20, tx) == predict_grid_serial(f, kBox, 30, 20, tx));
}

TEST_CASE("pgm mapping") {
  const HeatmapGrid g(kBox, 2, 2, {-30, -60, -60, -90});
  const auto px = grid_pixels(g);
  CHECK(px[0] == 255);
  CHECK((px[1] == 127 || px[1] == 128));
  CHECK(px[1] == 128);  // 127.5 rounds half up
  CHECK(px[2] == px[1]);
  CHECK(px[3] == 0);
  const HeatmapGrid flat(kBox, 2, 3, {-5, -5, -5, -5, -5, -5});
  for (auto v : grid_pixels(flat)) CHECK(v == 0);
  std::ostringstream pgm;
  write_grid_pgm(pgm, g);
  CHECK(pgm.str() == std::string("P5\n2 2\n255\n") + std::string{char(255), char(128), char(128), char(0)});
}

TEST_CASE("pgm mapping is monotone") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(-70, 20);
  std::vector<double> v(400);
  for (auto& x : v) x = n(rng);
  const HeatmapGrid g(kBox, 20, 20, v);
  const auto px = grid_pixels(g);
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[i] > v[j]) REQUIRE(px[i] >= px[j]);
    }
  }
}

TEST_CASE("csv round-trip and byte stability") {
  std::vector<double> v;
  for (int i = 0; i < 12; ++i) v.push_back(-90.0 + i * 1.37);
  const HeatmapGrid g(kBox, 3, 4, v);
  std::ostringstream out;
  write_grid_csv(out, g);
  CHECK(out.str().rfind("# bounds 21005000 21005800 105842500 105843300\n", 0) == 0);
  std::istringstream in(out.str());
  CHECK(read_grid_csv(in) == g);
  std::ostringstream again;
  write_grid_csv(again, g);
  CHECK(again.str() == out.str());

  const auto dir = std::filesystem::temp_directory_path() / "rssi_fieldmap_test";
  std::filesystem::create_directories(dir);
  export_grid(g, GridFormat::csv, dir / "g.csv");
  export_grid(g, GridFormat::pgm, dir / "g.pgm");
  std::ifstream f(dir / "g.csv");
  CHECK(read_grid_csv(f) == g);
  CHECK(std::filesystem::file_size(dir / "g.pgm") == std::string("P5\n4 3\n255\n").size() + 12);
  CHECK_THROWS_AS(export_grid(g, GridFormat::csv, "/nonexistent/dir/g.csv"), Error);
}

TEST_CASE("overlay") {
  const HeatmapGrid a(kBox, 2, 2, {-40, -50, -60, -70});
  const auto self = overlay_compare(a, a);
  CHECK(self.mae_db == 0.0);
  CHECK(self.mse_db2 == 0.0);
  const HeatmapGrid b(kBox, 2, 2, {-38, -48, -58, -68});
  const auto m = overlay_compare(a, b);
  CHECK(m.mae_db == 2.0);
  CHECK(m.mse_db2 == 4.0);
  CHECK_THROWS_AS(overlay_compare(a, HeatmapGrid(kBox, 4, 1 + 1, std::vector<double>(8))), Error);
  CHECK_THROWS_AS(overlay_compare(a, HeatmapGrid(GridBounds{0, 1, 0, 1}, 2, 2, {1, 2, 3, 4})),
                  Error);
}

TEST_CASE("forest on a noise-free field decays along rays") {
  FieldModel field;
  field.shadow_sigma_db = 0.0;
  const auto samples = clean(generate_walk(field, 4000, 150.0, 3)).kept;
  const auto data = make_dataset(samples, true);
  ForestParams p;
  p.n_trees = 50;
  const auto f = fit_forest(data, p);
  const auto b = bounds_around(field, 100.0);
  const std::size_t n = 41;
  const auto g = predict_grid(f, b, n, n, field.site());
  // Walk outwards from the centre cell along the 8 compass rays.
  const int c = static_cast<int>(n / 2);
  std::size_t pairs = 0, bad = 0;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (!dr && !dc) continue;
      for (int k = 1; k <= c; ++k) {
        const double inner = g.at(c + (k - 1) * dr, c + (k - 1) * dc);
        const double outer = g.at(c + k * dr, c + k * dc);
        ++pairs;
        if (outer > inner) ++bad;
      }
    }
  }
  CHECK(static_cast<double>(bad) <= 0.05 * static_cast<double>(pairs));
}

TEST_CASE("truth grid is the noise-free field") {
  FieldModel field;
  const auto b = bounds_around(field, 50.0);
  const auto g = field_grid(field, b, 5, 5);
  const auto p = cell_center(b, 5, 5, 1, 4);
  CHECK(g.at(1, 4) == eval_field(field, p.lat_e6, p.lon_e6));
}

}  // TEST_SUITE
