#pragma once

#include <string>
#include <vector>

namespace geoeval {

// Entry point behind the `geoeval` binary. Returns the process exit code:
// 0 on success, 1 for usage/config problems, 2 for runtime failures.
int run_cli(int argc, char** argv);

// Test convenience: same thing from an argument list (no program name).
int run_cli(const std::vector<std::string>& args);

}  // namespace geoeval
