#include "rssi/metrics.hpp"

#include <cmath>
#include <string>

#include "rssi/error.hpp"

namespace rssi {

namespace {

void check_lengths(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.empty()) throw Error(ErrorKind::metric, "metric over empty input");
  if (actual.size() != predicted.size()) {
    throw Error(ErrorKind::metric, "length mismatch: " + std::to_string(actual.size()) + " vs " +
                                       std::to_string(predicted.size()));
  }
}

}  // namespace

// Both accumulate strictly left to right so results are reproducible.
double mae(std::span<const double> actual, std::span<const double> predicted) {
  check_lengths(actual, predicted);
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) sum += std::abs(actual[i] - predicted[i]);
  return sum / static_cast<double>(actual.size());
}

double mse(std::span<const double> actual, std::span<const double> predicted) {
  check_lengths(actual, predicted);
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double e = actual[i] - predicted[i];
    sum += e * e;
  }
  return sum / static_cast<double>(actual.size());
}

MetricPair score(std::span<const double> actual, std::span<const double> predicted) {
  return {mae(actual, predicted), mse(actual, predicted), actual.size()};
}

}  // namespace rssi
