#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rssi/random.hpp"

namespace rssi {

/// One measurement row: coordinates stored as integer degrees x 10^6.
struct GeoSample {
  std::int64_t latitude_e6 = 0;
  std::int64_t longitude_e6 = 0;
  double distance_m = 0.0;
  double rssi_db = 0.0;

  friend bool operator==(const GeoSample&, const GeoSample&) = default;
};

/// Transmitter location plus the local degree-to-meter scale used to turn
/// coordinate differences into distances.
struct TxSite {
  std::int64_t lat_e6 = 0;
  std::int64_t lon_e6 = 0;
  double meters_per_e6 = 0.111;
};

double distance_m(const TxSite& site, std::int64_t lat_e6, std::int64_t lon_e6);

/// (l mod 10000) / 10000, computed on integers. Throws invalid_coordinate
/// for negative input.
double normalize_coordinate(std::int64_t scaled);

/// Normalized model input. Holds 2 values (lat, lon) or 3 (lat, lon,
/// distance) without allocating.
class FeatureVector {
 public:
  FeatureVector(double lat_norm, double lon_norm);
  FeatureVector(double lat_norm, double lon_norm, double distance_m);

  double lat_norm() const noexcept { return values_[0]; }
  double lon_norm() const noexcept { return values_[1]; }
  std::optional<double> distance_m() const noexcept;
  std::size_t size() const noexcept { return size_; }
  std::span<const double> values() const noexcept { return {values_.data(), size_}; }

 private:
  std::array<double, 3> values_{};
  std::size_t size_ = 2;
};

FeatureVector featurize(const GeoSample& sample, bool use_distance);

/// Featurizes an arbitrary lattice point the same way `featurize` treats a
/// measured sample. The distance feature needs `site`.
FeatureVector featurize_point(std::int64_t lat_e6, std::int64_t lon_e6, bool use_distance,
                              const std::optional<TxSite>& site);

/// Row-major feature matrix plus targets. All rows share one dimension.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t dim, std::vector<double> features, std::vector<double> targets,
          std::string provenance = {});

  static Dataset from_rows(const std::vector<std::vector<double>>& rows,
                           std::vector<double> targets, std::string provenance = {});

  std::size_t size() const noexcept { return targets_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return targets_.empty(); }

  std::span<const double> row(std::size_t i) const noexcept {
    return {features_.data() + i * dim_, dim_};
  }
  double feature(std::size_t i, std::size_t f) const noexcept { return features_[i * dim_ + f]; }
  double target(std::size_t i) const noexcept { return targets_[i]; }
  std::span<const double> targets() const noexcept { return targets_; }
  std::span<const double> features() const noexcept { return features_; }
  const std::string& provenance() const noexcept { return provenance_; }

  /// Rows at `indices`, in that order (repeats allowed).
  Dataset subset(std::span<const std::size_t> indices) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> features_;
  std::vector<double> targets_;
  std::string provenance_;
};

/// Throws split error when the cleaned sample list is empty.
Dataset make_dataset(std::span<const GeoSample> samples, bool use_distance,
                     std::string provenance = {});

struct CsvSchema {
  std::array<std::string, 5> columns{"sample", "lat", "lon", "distance", "rssi"};
};

std::vector<GeoSample> load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
std::vector<GeoSample> read_csv(std::istream& in, const CsvSchema& schema = {});
void write_csv(std::ostream& out, std::span<const GeoSample> samples,
               const CsvSchema& schema = {});
void save_csv(const std::filesystem::path& path, std::span<const GeoSample> samples,
              const CsvSchema& schema = {});

struct CleanBounds {
  double rssi_min = -130.0;
  double rssi_max = 0.0;
  std::int64_t lat_min = 0;
  std::int64_t lat_max = std::numeric_limits<std::int64_t>::max();
  std::int64_t lon_min = 0;
  std::int64_t lon_max = std::numeric_limits<std::int64_t>::max();
};

struct CleanResult {
  std::vector<GeoSample> kept;
  std::size_t rejected = 0;
};

/// Drops non-finite or out-of-bounds rows and repeated (lat, lon, rssi)
/// triples, keeping first occurrences in their original order.
CleanResult clean(std::span<const GeoSample> samples, const CleanBounds& bounds = {});

/// Seeded uniform shuffle; the first `train_count` rows become the training
/// set. Requires 0 < train_count < size.
std::pair<Dataset, Dataset> split(const Dataset& dataset, std::size_t train_count, Seed seed);

/// The shuffled index order `split` uses.
std::vector<std::size_t> split_permutation(std::size_t n, Seed seed);

}  // namespace rssi
