#pragma once

#include <string>
#include <vector>

namespace acca {

// Full CLI entry point; returns the process exit code
// (0 ok, 2 parameter error, 3 I/O error, 4 numerical abort).
int run_cli(int argc, const char* const* argv);

// Convenience overload for in-process tests.
int run_cli(const std::vector<std::string>& args);

}  // namespace acca
