#pragma once

#include <string>
#include <vector>

namespace isac::io {

inline constexpr const char* kToolVersion = "0.1.0";

/// Executes one CLI invocation (args exclude the program name) and writes
/// the requested artifacts. Returns the process exit code: 0 on success,
/// 1 on runtime errors (a machine-readable error JSON is printed), 2 on
/// usage errors.
int run_command(const std::vector<std::string>& args);

} // namespace isac::io
