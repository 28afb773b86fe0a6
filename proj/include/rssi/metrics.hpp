#pragma once

#include <cstddef>
#include <span>

namespace rssi {

struct MetricPair {
  double mae_db = 0.0;
  double mse_db2 = 0.0;
  std::size_t n = 0;
};

/// Mean absolute error. Throws metric error on empty or mismatched input.
double mae(std::span<const double> actual, std::span<const double> predicted);

/// Mean squared error. Same preconditions as `mae`.
double mse(std::span<const double> actual, std::span<const double> predicted);

MetricPair score(std::span<const double> actual, std::span<const double> predicted);

}  // namespace rssi
