#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rssi {

enum class ErrorKind {
  invalid_coordinate,
  parse,
  split,
  metric,
  fit,
  predict,
  oob_unavailable,
  grid,
  io,
  config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every module reports failures through this one exception type; `kind()`
/// tells callers which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rssi
