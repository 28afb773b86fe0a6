#pragma once

#include <cstddef>
#include <vector>

#include "rssi/cart.hpp"
#include "rssi/metrics.hpp"
#include "rssi/random.hpp"
#include "rssi/regressor.hpp"

namespace rssi {

struct ForestParams {
  int n_trees = 100;
  TreeParams tree{};
  /// Features drawn per split; 0 means ceil(dim / 2).
  std::size_t m_features = 0;
  bool bootstrap = true;
  Seed seed = 7;

  void validate(std::size_t dim) const;
  std::size_t resolved_m_features(std::size_t dim) const noexcept;
};

class ForestModel final : public Regressor {
 public:
  ForestModel(std::size_t dim, std::vector<RegressionTree> trees,
              std::vector<std::vector<std::size_t>> oob_indices, bool bootstrap);

  std::string_view kind() const noexcept override { return "forest"; }
  std::size_t dim() const noexcept override { return dim_; }
  /// Mean of the member trees' predictions.
  double predict(std::span<const double> x) const override;
  using Regressor::predict;
  void write(std::ostream& out) const override;
  /// Out-of-bag index lists are not serialized; read models report
  /// bootstrapped() == false.
  static ForestModel read(io::LineReader& in);

  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
  /// Sorted training-row indices left out of each tree's bootstrap sample.
  const std::vector<std::vector<std::size_t>>& oob_indices() const noexcept { return oob_; }
  bool bootstrapped() const noexcept { return bootstrap_; }

 private:
  std::size_t dim_;
  std::vector<RegressionTree> trees_;
  std::vector<std::vector<std::size_t>> oob_;
  bool bootstrap_;
};

/// Trees are grown by OpenMP workers. Each tree draws from its own RNG
/// stream derived from (seed, tree index), so the result is bit-identical
/// to fit_forest_serial for any worker count.
ForestModel fit_forest(const Dataset& train, const ForestParams& params);
ForestModel fit_forest_serial(const Dataset& train, const ForestParams& params);

std::vector<double> predict_batch(const ForestModel& model, const Dataset& data);
std::vector<double> predict_batch_serial(const ForestModel& model, const Dataset& data);

/// Per training row, averages only the trees whose bootstrap excluded it;
/// MetricPair::n is the number of rows with at least one such tree.
MetricPair oob_error(const ForestModel& model, const Dataset& train);
MetricPair oob_error_serial(const ForestModel& model, const Dataset& train);

struct GbtParams {
  int n_stages = 100;
  double learning_rate = 0.1;
  TreeParams tree{3, 2, 2};
  Seed seed = 7;

  void validate() const;
};

struct GbtStage {
  RegressionTree tree;
  double learning_rate;
};

class GbtModel final : public Regressor {
 public:
  GbtModel(std::size_t dim, double base_value, std::vector<GbtStage> stages);

  std::string_view kind() const noexcept override { return "gbt"; }
  std::size_t dim() const noexcept override { return dim_; }
  double predict(std::span<const double> x) const override;
  using Regressor::predict;
  /// Prediction using only the first `stages` boosting stages.
  double predict_staged(std::span<const double> x, std::size_t stages) const;
  void write(std::ostream& out) const override;
  static GbtModel read(io::LineReader& in);

  double base_value() const noexcept { return base_; }
  const std::vector<GbtStage>& stages() const noexcept { return stages_; }

 private:
  std::size_t dim_;
  double base_;
  std::vector<GbtStage> stages_;
};

/// Squared-error gradient boosting: start from the mean target, then fit
/// each stage's tree to the current residuals. Stages are sequential.
GbtModel fit_gbt(const Dataset& train, const GbtParams& params);

}  // namespace rssi
