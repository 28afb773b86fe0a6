#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "rssi/evaluate.hpp"
#include "rssi/fieldmap.hpp"
#include "rssi/synthfield.hpp"
#include "rssi/tuning.hpp"

namespace rssi {

/// One-shot protocol: synthesize a campaign, split it, tune every family on
/// a holdout of the training part, refit the winners and score them on the
/// test part.
struct PaperRunOptions {
  Seed seed = 7;
  std::size_t sample_count = 10000;
  std::size_t train_count = 4000;
  double walk_radius_m = 150.0;
  FieldModel field{};
  bool use_distance = true;
  bool reduced_grids = false;
  double val_fraction = 0.25;
  std::size_t grid_rows = 64;
  std::size_t grid_cols = 64;
  int latency_repeats = 5;
  ModelConfigs base{};
  std::vector<ModelKind> kinds{kAllModelKinds.begin(), kAllModelKinds.end()};

  void validate() const;
  /// Flat `key = value` lines.
  void write(std::ostream& out) const;
};

struct PaperRunResult {
  EvaluationReport report;
  std::vector<HyperGrid> grids;
  std::vector<TuneResult> tuning;
  ModelConfigs tuned;
  HeatmapGrid truth_grid;
  HeatmapGrid forest_grid;
  MetricPair overlay;
};

HyperGrid run_grid(ModelKind kind, bool reduced);

/// Runs the protocol. When `out_dir` is non-empty every artifact is written
/// there; files whose names start with `timing` hold the wall-clock data,
/// everything else is byte-stable for a fixed seed.
PaperRunResult paper_run(const PaperRunOptions& options, const std::filesystem::path& out_dir = {});

}  // namespace rssi
