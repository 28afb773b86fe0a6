#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rssi/models.hpp"

namespace rssi {

struct GridAxis {
  std::string name;
  std::vector<double> values;
};

/// Ordered (axis name, value) assignments for one grid point.
using GridPoint = std::vector<std::pair<std::string, double>>;

struct HyperGrid {
  ModelKind kind = ModelKind::tree;
  std::vector<GridAxis> axes;

  std::size_t size() const noexcept;
  /// Cartesian product in lexicographic order: the first axis varies
  /// slowest. A grid without axes has exactly one (empty) point.
  std::vector<GridPoint> points() const;
};

/// Grids as published for the five families (the SVR grid is an extension).
HyperGrid paper_grid(ModelKind kind);
/// Smaller grids with the same axes, for desk-scale runs.
HyperGrid reduced_grid(ModelKind kind);

/// Overwrites the fields named by `point` in the config of `kind`. Axis
/// names: max_depth, min_samples_split, min_samples_leaf, n_trees,
/// m_features, n_stages, learning_rate, c, epsilon, gamma.
ModelConfigs apply_point(ModelConfigs base, ModelKind kind, const GridPoint& point);

struct Trial {
  GridPoint params;
  double val_mae = 0.0;
  double val_mse = 0.0;
  double fit_seconds = 0.0;
};

struct TuneResult {
  ModelKind kind = ModelKind::tree;
  GridPoint best_params;
  double best_val_mse = 0.0;
  ModelConfigs best_configs;
  std::vector<Trial> trials;
};

/// Splits `train` into fit/validation folds with `split`, fits every grid
/// point on the fit fold and scores validation MSE. Trials run on OpenMP
/// workers and are reported in enumeration order; ties keep the earliest.
TuneResult grid_search(const Dataset& train, const HyperGrid& grid, const ModelConfigs& base,
                       double val_fraction, Seed seed);
TuneResult grid_search_serial(const Dataset& train, const HyperGrid& grid,
                              const ModelConfigs& base, double val_fraction, Seed seed);

/// Columns: one per axis, then val_mae, val_mse and (optionally) fit_seconds.
void write_trials_csv(std::ostream& out, const HyperGrid& grid, const TuneResult& result,
                      bool include_timing = true);

std::string format_point(const GridPoint& point);

}  // namespace rssi
