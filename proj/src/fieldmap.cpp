#include "rssi/fieldmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "rssi/error.hpp"
#include "text.hpp"

namespace rssi {

GridBounds bounds_around(const FieldModel& field, double radius_m) {
  const auto half = static_cast<std::int64_t>(std::ceil(radius_m / field.meters_per_e6));
  return {field.tx_lat_e6 - half, field.tx_lat_e6 + half, field.tx_lon_e6 - half,
          field.tx_lon_e6 + half};
}

HeatmapGrid::HeatmapGrid(GridBounds bounds, std::size_t rows, std::size_t cols,
                         std::vector<double> values)
    : bounds_(bounds), rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ < 2 || cols_ < 2) throw Error(ErrorKind::grid, "grid needs at least 2 rows and 2 cols");
  if (bounds_.lat_min >= bounds_.lat_max || bounds_.lon_min >= bounds_.lon_max) {
    throw Error(ErrorKind::grid, "grid bounds are not ordered");
  }
  if (values_.size() != rows_ * cols_) {
    throw Error(ErrorKind::grid, "grid has " + std::to_string(values_.size()) +
                                     " values, expected " + std::to_string(rows_ * cols_));
  }
}

WalkPoint cell_center(const GridBounds& bounds, std::size_t rows, std::size_t cols,
                      std::size_t r, std::size_t c) {
  const double lat_step = static_cast<double>(bounds.lat_max - bounds.lat_min) / static_cast<double>(rows);
  const double lon_step = static_cast<double>(bounds.lon_max - bounds.lon_min) / static_cast<double>(cols);
  return {bounds.lat_max - std::llround((static_cast<double>(r) + 0.5) * lat_step),
          bounds.lon_min + std::llround((static_cast<double>(c) + 0.5) * lon_step)};
}

namespace {

void check_grid_request(const Regressor& model, const GridBounds& bounds, std::size_t rows,
                        std::size_t cols, const std::optional<TxSite>& tx) {
  if (rows < 2 || cols < 2) throw Error(ErrorKind::grid, "grid needs at least 2 rows and 2 cols");
  if (bounds.lat_min >= bounds.lat_max || bounds.lon_min >= bounds.lon_max) {
    throw Error(ErrorKind::grid, "grid bounds are not ordered");
  }
  if (model.dim() != 2 && model.dim() != 3) {
    throw Error(ErrorKind::grid, "model was not trained on coordinate features");
  }
  if (model.dim() == 3 && !tx) {
    throw Error(ErrorKind::grid, "model uses the distance feature; transmitter position required");
  }
}

double predict_cell(const Regressor& model, const GridBounds& bounds, std::size_t rows,
                    std::size_t cols, std::size_t cell, const std::optional<TxSite>& tx) {
  const auto p = cell_center(bounds, rows, cols, cell / cols, cell % cols);
  return model.predict(featurize_point(p.lat_e6, p.lon_e6, model.dim() == 3, tx));
}

}  // namespace

HeatmapGrid predict_grid(const Regressor& model, const GridBounds& bounds, std::size_t rows,
                         std::size_t cols, const std::optional<TxSite>& tx) {
  check_grid_request(model, bounds, rows, cols, tx);
  std::vector<double> values(rows * cols);
  const auto cells = static_cast<std::ptrdiff_t>(values.size());
  std::optional<Error> failure;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < cells; ++i) {
    try {
      values[static_cast<std::size_t>(i)] =
          predict_cell(model, bounds, rows, cols, static_cast<std::size_t>(i), tx);
    } catch (const Error& e) {
#pragma omp critical(rssi_grid_error)
      if (!failure) failure = e;
    }
  }
  if (failure) throw *failure;
  return HeatmapGrid(bounds, rows, cols, std::move(values));
}

HeatmapGrid predict_grid_serial(const Regressor& model, const GridBounds& bounds,
                                std::size_t rows, std::size_t cols,
                                const std::optional<TxSite>& tx) {
  check_grid_request(model, bounds, rows, cols, tx);
  std::vector<double> values(rows * cols);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = predict_cell(model, bounds, rows, cols, i, tx);
  }
  return HeatmapGrid(bounds, rows, cols, std::move(values));
}

HeatmapGrid field_grid(const FieldModel& field, const GridBounds& bounds, std::size_t rows,
                       std::size_t cols) {
  if (rows < 2 || cols < 2) throw Error(ErrorKind::grid, "grid needs at least 2 rows and 2 cols");
  std::vector<double> values(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto p = cell_center(bounds, rows, cols, r, c);
      values[r * cols + c] = eval_field(field, p.lat_e6, p.lon_e6);
    }
  }
  return HeatmapGrid(bounds, rows, cols, std::move(values));
}

void write_grid_csv(std::ostream& out, const HeatmapGrid& grid) {
  const auto& b = grid.bounds();
  out << "# bounds " << b.lat_min << ' ' << b.lat_max << ' ' << b.lon_min << ' ' << b.lon_max
      << '\n';
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      out << (c ? "," : "") << text::format_double(grid.at(r, c));
    }
    out << '\n';
  }
}

HeatmapGrid read_grid_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::parse, "grid csv: missing bounds line");
  const auto head = text::split(text::trim(line), ' ');
  if (head.size() != 6 || head[0] != "#" || head[1] != "bounds") {
    throw Error(ErrorKind::parse, "grid csv: first line must be '# bounds ...'");
  }
  GridBounds b;
  std::int64_t* fields[] = {&b.lat_min, &b.lat_max, &b.lon_min, &b.lon_max};
  for (int k = 0; k < 4; ++k) {
    const auto v = text::parse_int(head[static_cast<std::size_t>(k) + 2]);
    if (!v) throw Error(ErrorKind::parse, "grid csv: bad bound");
    *fields[k] = *v;
  }
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  while (std::getline(in, line)) {
    const auto t = text::trim(line);
    if (t.empty()) continue;
    const auto cells = text::split(t, ',');
    if (rows == 0) cols = cells.size();
    if (cells.size() != cols) {
      throw Error(ErrorKind::parse, "grid csv: ragged row " + std::to_string(rows + 1));
    }
    for (const auto cell : cells) {
      const auto v = text::parse_double(cell);
      if (!v) throw Error(ErrorKind::parse, "grid csv: bad value in row " + std::to_string(rows + 1));
      values.push_back(*v);
    }
    ++rows;
  }
  return HeatmapGrid(b, rows, cols, std::move(values));
}

std::vector<std::uint8_t> grid_pixels(const HeatmapGrid& grid) {
  const auto& v = grid.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  std::vector<std::uint8_t> px(v.size(), 0);
  const double range = *hi - *lo;
  if (!(range > 0.0)) return px;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double scaled = (v[i] - *lo) / range * 255.0;
    px[i] = static_cast<std::uint8_t>(std::min(255.0, std::floor(scaled + 0.5)));
  }
  return px;
}

void write_grid_pgm(std::ostream& out, const HeatmapGrid& grid) {
  out << "P5\n" << grid.cols() << ' ' << grid.rows() << "\n255\n";
  const auto px = grid_pixels(grid);
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

void export_grid(const HeatmapGrid& grid, GridFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  if (format == GridFormat::csv) {
    write_grid_csv(out, grid);
  } else {
    write_grid_pgm(out, grid);
  }
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

MetricPair overlay_compare(const HeatmapGrid& a, const HeatmapGrid& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || !(a.bounds() == b.bounds())) {
    throw Error(ErrorKind::grid, "overlay needs grids with identical shape and bounds");
  }
  return score(a.values(), b.values());
}

}  // namespace rssi
