#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "rssi/dataset.hpp"

namespace rssi {

/// Fitted model contract shared by all five families. Implementations are
/// immutable after fitting and safe to query from several threads.
class Regressor {
 public:
  virtual ~Regressor() = default;

  virtual std::string_view kind() const noexcept = 0;
  virtual std::size_t dim() const noexcept = 0;

  /// Throws predict error when x.size() != dim().
  virtual double predict(std::span<const double> x) const = 0;
  double predict(const FeatureVector& x) const { return predict(x.values()); }

  /// Model body in the line-oriented text format (no header).
  virtual void write(std::ostream& out) const = 0;

 protected:
  void check_dim(std::span<const double> x) const;
};

/// Predictions for every row, in order.
std::vector<double> predict_all(const Regressor& model, const Dataset& data);

}  // namespace rssi
