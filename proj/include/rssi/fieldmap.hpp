#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rssi/metrics.hpp"
#include "rssi/regressor.hpp"
#include "rssi/synthfield.hpp"

namespace rssi {

struct GridBounds {
  std::int64_t lat_min = 0;
  std::int64_t lat_max = 0;
  std::int64_t lon_min = 0;
  std::int64_t lon_max = 0;

  friend bool operator==(const GridBounds&, const GridBounds&) = default;
};

/// Square bounds that just contain a disc of `radius_m` around the
/// field's transmitter.
GridBounds bounds_around(const FieldModel& field, double radius_m);

/// Row-major lattice of RSSI values. Row 0 is the northern edge
/// (lat_max); column 0 is the western edge (lon_min).
class HeatmapGrid {
 public:
  HeatmapGrid(GridBounds bounds, std::size_t rows, std::size_t cols, std::vector<double> values);

  const GridBounds& bounds() const noexcept { return bounds_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double at(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }

  friend bool operator==(const HeatmapGrid&, const HeatmapGrid&) = default;

 private:
  GridBounds bounds_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

/// Integer coordinates of the centre of cell (r, c), rounded to the nearest
/// unit.
WalkPoint cell_center(const GridBounds& bounds, std::size_t rows, std::size_t cols,
                      std::size_t r, std::size_t c);

/// Evaluates `model` at every cell centre using the training featurization.
/// A 3-feature model needs `tx` to compute the distance feature.
HeatmapGrid predict_grid(const Regressor& model, const GridBounds& bounds, std::size_t rows,
                         std::size_t cols, const std::optional<TxSite>& tx);
HeatmapGrid predict_grid_serial(const Regressor& model, const GridBounds& bounds,
                                std::size_t rows, std::size_t cols,
                                const std::optional<TxSite>& tx);

/// Noise-free field values at the cell centres.
HeatmapGrid field_grid(const FieldModel& field, const GridBounds& bounds, std::size_t rows,
                       std::size_t cols);

enum class GridFormat { csv, pgm };

/// `# bounds lat_min lat_max lon_min lon_max` then one comma-separated line
/// per row.
void write_grid_csv(std::ostream& out, const HeatmapGrid& grid);
HeatmapGrid read_grid_csv(std::istream& in);

/// Affine map of [min, max] onto [0, 255], rounding half up. A constant
/// grid maps to all zeros.
std::vector<std::uint8_t> grid_pixels(const HeatmapGrid& grid);
/// Binary P5, maxval 255.
void write_grid_pgm(std::ostream& out, const HeatmapGrid& grid);

void export_grid(const HeatmapGrid& grid, GridFormat format, const std::filesystem::path& path);

/// Cell-wise MAE/MSE between two grids of identical shape and bounds.
MetricPair overlay_compare(const HeatmapGrid& a, const HeatmapGrid& b);

}  // namespace rssi
