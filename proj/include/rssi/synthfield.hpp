#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rssi/dataset.hpp"
#include "rssi/random.hpp"

namespace rssi {

/// Log-distance path-loss field with i.i.d. log-normal shadowing, centred on
/// one transmitter. Stand-in for measured campaigns.
struct FieldModel {
  std::int64_t tx_lat_e6 = 21005400;
  std::int64_t tx_lon_e6 = 105842900;
  double p0_db = -30.0;
  double d0_m = 1.0;
  double exponent_n = 3.0;
  double shadow_sigma_db = 4.0;
  double meters_per_e6 = 0.111;

  TxSite site() const noexcept { return {tx_lat_e6, tx_lon_e6, meters_per_e6}; }
  void validate() const;
};

/// Mean path-loss RSSI at distance `d`; distances below d0 are clamped to d0.
double path_loss_rssi(const FieldModel& field, double d);

/// Noise-free field value at a lattice point.
double eval_field(const FieldModel& field, std::int64_t lat_e6, std::int64_t lon_e6);

/// Field value plus one N(0, shadow_sigma^2) draw from `rng`.
double eval_field(const FieldModel& field, std::int64_t lat_e6, std::int64_t lon_e6, Rng& rng);

struct WalkPoint {
  std::int64_t lat_e6 = 0;
  std::int64_t lon_e6 = 0;
};

/// Bounded random walk around the transmitter: every point (after rounding
/// to integer coordinates) lies within `radius_m`.
std::vector<WalkPoint> random_walk(const FieldModel& field, std::size_t count, double radius_m,
                                   Seed seed);

/// Walk positions annotated with true distance and shadowed RSSI.
std::vector<GeoSample> generate_walk(const FieldModel& field, std::size_t count, double radius_m,
                                     Seed seed);

}  // namespace rssi
