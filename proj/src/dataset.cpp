#include "rssi/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "rssi/error.hpp"
#include "text.hpp"

namespace rssi {

namespace {
constexpr std::int64_t kCoordinateModulus = 10000;
}

double distance_m(const TxSite& site, std::int64_t lat_e6, std::int64_t lon_e6) {
  const double dlat = static_cast<double>(lat_e6 - site.lat_e6);
  const double dlon = static_cast<double>(lon_e6 - site.lon_e6);
  return site.meters_per_e6 * std::hypot(dlat, dlon);
}

double normalize_coordinate(std::int64_t scaled) {
  if (scaled < 0) {
    throw Error(ErrorKind::invalid_coordinate,
                "negative scaled coordinate " + std::to_string(scaled));
  }
  return static_cast<double>(scaled % kCoordinateModulus) / static_cast<double>(kCoordinateModulus);
}

FeatureVector::FeatureVector(double lat_norm, double lon_norm)
    : values_{lat_norm, lon_norm, 0.0}, size_(2) {}

FeatureVector::FeatureVector(double lat_norm, double lon_norm, double distance_m)
    : values_{lat_norm, lon_norm, distance_m}, size_(3) {}

std::optional<double> FeatureVector::distance_m() const noexcept {
  if (size_ == 3) return values_[2];
  return std::nullopt;
}

FeatureVector featurize(const GeoSample& sample, bool use_distance) {
  const double lat = normalize_coordinate(sample.latitude_e6);
  const double lon = normalize_coordinate(sample.longitude_e6);
  if (use_distance) return {lat, lon, sample.distance_m};
  return {lat, lon};
}

FeatureVector featurize_point(std::int64_t lat_e6, std::int64_t lon_e6, bool use_distance,
                              const std::optional<TxSite>& site) {
  const double lat = normalize_coordinate(lat_e6);
  const double lon = normalize_coordinate(lon_e6);
  if (!use_distance) return {lat, lon};
  if (!site) {
    throw Error(ErrorKind::grid, "distance feature requested but no transmitter position given");
  }
  return {lat, lon, rssi::distance_m(*site, lat_e6, lon_e6)};
}

Dataset::Dataset(std::size_t dim, std::vector<double> features, std::vector<double> targets,
                 std::string provenance)
    : dim_(dim),
      features_(std::move(features)),
      targets_(std::move(targets)),
      provenance_(std::move(provenance)) {
  if (dim_ == 0 && !targets_.empty()) {
    throw Error(ErrorKind::fit, "dataset rows must have at least one feature");
  }
  if (features_.size() != dim_ * targets_.size()) {
    throw Error(ErrorKind::fit, "feature matrix size does not match targets x dim");
  }
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows,
                           std::vector<double> targets, std::string provenance) {
  if (rows.size() != targets.size()) {
    throw Error(ErrorKind::fit, "row count does not match target count");
  }
  const std::size_t dim = rows.empty() ? 0 : rows.front().size();
  std::vector<double> flat;
  flat.reserve(dim * rows.size());
  for (const auto& r : rows) {
    if (r.size() != dim) throw Error(ErrorKind::fit, "rows have differing dimensionality");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Dataset(dim, std::move(flat), std::move(targets), std::move(provenance));
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(indices.size() * dim_);
  y.reserve(indices.size());
  for (const auto i : indices) {
    const auto r = row(i);
    x.insert(x.end(), r.begin(), r.end());
    y.push_back(targets_[i]);
  }
  return Dataset(dim_, std::move(x), std::move(y), provenance_);
}

Dataset make_dataset(std::span<const GeoSample> samples, bool use_distance,
                     std::string provenance) {
  if (samples.empty()) throw Error(ErrorKind::split, "dataset is empty after cleaning");
  const std::size_t dim = use_distance ? 3 : 2;
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(samples.size() * dim);
  y.reserve(samples.size());
  for (const auto& s : samples) {
    const auto fv = featurize(s, use_distance);
    x.insert(x.end(), fv.values().begin(), fv.values().end());
    y.push_back(s.rssi_db);
  }
  return Dataset(dim, std::move(x), std::move(y), std::move(provenance));
}

std::vector<GeoSample> read_csv(std::istream& in, const CsvSchema& schema) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw Error(ErrorKind::parse, "line 1: missing header row");
  ++line_no;
  {
    const auto cells = text::split(text::trim(line), ',');
    bool ok = cells.size() == schema.columns.size();
    for (std::size_t i = 0; ok && i < cells.size(); ++i) {
      ok = text::trim(cells[i]) == schema.columns[i];
    }
    if (!ok) throw Error(ErrorKind::parse, "line 1: header does not match schema");
  }

  std::vector<GeoSample> out;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = text::trim(line);
    if (trimmed.empty()) continue;
    const auto cells = text::split(trimmed, ',');
    const auto where = "line " + std::to_string(line_no) + ": ";
    if (cells.size() != schema.columns.size()) {
      throw Error(ErrorKind::parse, where + "expected " + std::to_string(schema.columns.size()) +
                                        " columns, got " + std::to_string(cells.size()));
    }
    const auto lat = text::parse_int(cells[1]);
    const auto lon = text::parse_int(cells[2]);
    const auto dist = text::parse_double(cells[3]);
    const auto rssi = text::parse_double(cells[4]);
    if (!text::parse_int(cells[0])) throw Error(ErrorKind::parse, where + "bad sample index");
    if (!lat || !lon) throw Error(ErrorKind::parse, where + "coordinates must be integers");
    if (!dist) throw Error(ErrorKind::parse, where + "non-numeric distance");
    if (!rssi) throw Error(ErrorKind::parse, where + "non-numeric rssi");
    out.push_back({*lat, *lon, *dist, *rssi});
  }
  return out;
}

std::vector<GeoSample> load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  return read_csv(in, schema);
}

void write_csv(std::ostream& out, std::span<const GeoSample> samples, const CsvSchema& schema) {
  for (std::size_t i = 0; i < schema.columns.size(); ++i) {
    out << (i ? "," : "") << schema.columns[i];
  }
  out << '\n';
  std::size_t index = 1;
  for (const auto& s : samples) {
    out << index++ << ',' << s.latitude_e6 << ',' << s.longitude_e6 << ','
        << text::format_double(s.distance_m) << ',' << text::format_double(s.rssi_db) << '\n';
  }
}

void save_csv(const std::filesystem::path& path, std::span<const GeoSample> samples,
              const CsvSchema& schema) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  write_csv(out, samples, schema);
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

CleanResult clean(std::span<const GeoSample> samples, const CleanBounds& bounds) {
  CleanResult result;
  std::set<std::tuple<std::int64_t, std::int64_t, double>> seen;
  for (const auto& s : samples) {
    const bool finite = std::isfinite(s.distance_m) && std::isfinite(s.rssi_db);
    const bool in_bounds = finite && s.distance_m >= 0.0 && s.rssi_db >= bounds.rssi_min &&
                           s.rssi_db <= bounds.rssi_max && s.latitude_e6 >= bounds.lat_min &&
                           s.latitude_e6 <= bounds.lat_max && s.longitude_e6 >= bounds.lon_min &&
                           s.longitude_e6 <= bounds.lon_max;
    if (!in_bounds || !seen.emplace(s.latitude_e6, s.longitude_e6, s.rssi_db).second) {
      ++result.rejected;
      continue;
    }
    result.kept.push_back(s);
  }
  return result;
}

std::vector<std::size_t> split_permutation(std::size_t n, Seed seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, std::size_t train_count, Seed seed) {
  if (train_count == 0 || train_count >= dataset.size()) {
    throw Error(ErrorKind::split, "train_count " + std::to_string(train_count) +
                                      " must lie strictly between 0 and " +
                                      std::to_string(dataset.size()));
  }
  const auto order = split_permutation(dataset.size(), seed);
  const std::span<const std::size_t> all(order);
  return {dataset.subset(all.first(train_count)), dataset.subset(all.subspan(train_count))};
}

}  // namespace rssi
