#pragma once

// Line-oriented reader for the model text format: each line is
// `key value value ...`.

#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rssi/error.hpp"
#include "text.hpp"

namespace rssi::io {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next non-empty line split on whitespace; the first token must equal
  /// `key`. Returns the remaining tokens.
  std::vector<std::string> expect(std::string_view key, std::size_t min_values = 0) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (text::trim(line).empty()) continue;
      std::istringstream ss(line);
      std::string head;
      ss >> head;
      if (head != key) fail("expected '" + std::string(key) + "', found '" + head + "'");
      std::vector<std::string> values;
      for (std::string tok; ss >> tok;) values.push_back(tok);
      if (values.size() < min_values) fail("too few values for '" + std::string(key) + "'");
      return values;
    }
    fail("unexpected end of model file, expected '" + std::string(key) + "'");
  }

  /// Next non-empty line as (key, values).
  std::pair<std::string, std::vector<std::string>> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (text::trim(line).empty()) continue;
      std::istringstream ss(line);
      std::string head;
      ss >> head;
      std::vector<std::string> values;
      for (std::string tok; ss >> tok;) values.push_back(tok);
      return {head, values};
    }
    fail("unexpected end of model file");
  }

  double number(std::string_view key) { return to_double(expect(key, 1).front()); }
  long long integer(std::string_view key) { return to_int(expect(key, 1).front()); }
  std::string word(std::string_view key) { return expect(key, 1).front(); }

  double to_double(const std::string& tok) {
    const auto v = text::parse_double(tok);
    if (!v) fail("bad number '" + tok + "'");
    return *v;
  }
  long long to_int(const std::string& tok) {
    const auto v = text::parse_int(tok);
    if (!v) fail("bad integer '" + tok + "'");
    return *v;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::parse, "model line " + std::to_string(line_no_) + ": " + msg);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace rssi::io
