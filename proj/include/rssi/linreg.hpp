#pragma once

#include <vector>

#include "rssi/regressor.hpp"

namespace rssi {

namespace io {
class LineReader;
}

/// f(x) = theta . x + theta0
class LinearModel final : public Regressor {
 public:
  LinearModel(std::vector<double> theta, double theta0);

  std::string_view kind() const noexcept override { return "linear"; }
  std::size_t dim() const noexcept override { return theta_.size(); }
  double predict(std::span<const double> x) const override;
  using Regressor::predict;
  void write(std::ostream& out) const override;
  static LinearModel read(io::LineReader& in);

  const std::vector<double>& theta() const noexcept { return theta_; }
  double theta0() const noexcept { return theta0_; }

 private:
  std::vector<double> theta_;
  double theta0_;
};

/// Least squares on the intercept-augmented design matrix via the normal
/// equations. Rank-deficient systems get the minimum-norm solution.
LinearModel fit_linear(const Dataset& train);

}  // namespace rssi
