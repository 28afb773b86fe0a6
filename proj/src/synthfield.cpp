#include "rssi/synthfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rssi/error.hpp"

namespace rssi {

void FieldModel::validate() const {
  if (!(d0_m > 0.0)) throw Error(ErrorKind::config, "field d0_m must be > 0");
  if (!(exponent_n > 0.0)) throw Error(ErrorKind::config, "field exponent_n must be > 0");
  if (!(shadow_sigma_db >= 0.0)) throw Error(ErrorKind::config, "field shadow_sigma_db must be >= 0");
  if (!(meters_per_e6 > 0.0)) throw Error(ErrorKind::config, "field meters_per_e6 must be > 0");
}

double path_loss_rssi(const FieldModel& field, double d) {
  const double ratio = std::max(d, field.d0_m) / field.d0_m;
  return field.p0_db - 10.0 * field.exponent_n * std::log10(ratio);
}

double eval_field(const FieldModel& field, std::int64_t lat_e6, std::int64_t lon_e6) {
  return path_loss_rssi(field, distance_m(field.site(), lat_e6, lon_e6));
}

double eval_field(const FieldModel& field, std::int64_t lat_e6, std::int64_t lon_e6, Rng& rng) {
  const double mean = eval_field(field, lat_e6, lon_e6);
  if (field.shadow_sigma_db == 0.0) return mean;
  std::normal_distribution<double> shadow(0.0, field.shadow_sigma_db);
  return mean + shadow(rng);
}

std::vector<WalkPoint> random_walk(const FieldModel& field, std::size_t count, double radius_m,
                                   Seed seed) {
  field.validate();
  if (count == 0) throw Error(ErrorKind::config, "walk count must be > 0");
  if (!(radius_m > 0.0)) throw Error(ErrorKind::config, "walk radius must be > 0");

  Rng rng(seed);
  const auto site = field.site();
  const double step_sigma = radius_m / 8.0;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::normal_distribution<double> step(0.0, step_sigma);

  auto to_point = [&](double north_m, double east_m) {
    return WalkPoint{site.lat_e6 + std::llround(north_m / site.meters_per_e6),
                     site.lon_e6 + std::llround(east_m / site.meters_per_e6)};
  };
  auto inside = [&](const WalkPoint& p) {
    return distance_m(site, p.lat_e6, p.lon_e6) <= radius_m;
  };

  // Uniform start inside the disc by rejection.
  double north = 0.0;
  double east = 0.0;
  for (int tries = 0; tries < 1000; ++tries) {
    const double n = unit(rng) * radius_m;
    const double e = unit(rng) * radius_m;
    if (inside(to_point(n, e))) {
      north = n;
      east = e;
      break;
    }
  }

  std::vector<WalkPoint> walk;
  walk.reserve(count);
  walk.push_back(to_point(north, east));
  while (walk.size() < count) {
    for (int tries = 0; tries < 64; ++tries) {
      const double n = north + step(rng);
      const double e = east + step(rng);
      if (inside(to_point(n, e))) {
        north = n;
        east = e;
        break;
      }
    }
    walk.push_back(to_point(north, east));
  }
  return walk;
}

std::vector<GeoSample> generate_walk(const FieldModel& field, std::size_t count, double radius_m,
                                     Seed seed) {
  const auto walk = random_walk(field, count, radius_m, seed);
  Rng shadow_rng(derive_seed(seed, 1));
  std::vector<GeoSample> out;
  out.reserve(walk.size());
  for (const auto& p : walk) {
    out.push_back({p.lat_e6, p.lon_e6, distance_m(field.site(), p.lat_e6, p.lon_e6),
                   eval_field(field, p.lat_e6, p.lon_e6, shadow_rng)});
  }
  return out;
}

}  // namespace rssi
