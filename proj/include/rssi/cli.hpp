#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rssi::cli {

/// Runs one command line (program name excluded). Returns the process exit
/// code: 0 on success, 1 on a runtime error, 2 on bad usage.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads flat `key = value` lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

}  // namespace rssi::cli
