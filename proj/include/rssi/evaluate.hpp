#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rssi/models.hpp"

namespace rssi {

struct ReportRow {
  ModelKind kind = ModelKind::linear;
  double test_mae_db = 0.0;
  double test_mse_db2 = 0.0;
  double fit_seconds = 0.0;
  double predict_micros_per_sample = 0.0;
};

struct EvaluationReport {
  std::vector<ReportRow> rows;
  std::string dataset;
  Seed seed = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;

  void write_text(std::ostream& out) const;
  /// `include_timing = false` drops the two wall-clock columns, leaving a
  /// file that is byte-stable for a fixed seed.
  void write_csv(std::ostream& out, bool include_timing = true) const;
  std::string to_json() const;
};

/// Fits each requested family on `train` and scores MAE/MSE on `test`.
/// Rows follow the order of `kinds`. Fitted models are handed back through
/// `fitted` when it is non-null. Models run one after another so the
/// timing columns are not disturbed by each other.
EvaluationReport compare_models(const Dataset& train, const Dataset& test,
                                const ModelConfigs& configs, Seed seed,
                                std::span<const ModelKind> kinds = kAllModelKinds,
                                int latency_repeats = 5,
                                std::vector<std::unique_ptr<Regressor>>* fitted = nullptr);

/// Median over `repeats` of (batch wall time / batch size), in microseconds.
double latency_probe(const Regressor& model, const Dataset& samples, int repeats = 5);

}  // namespace rssi
