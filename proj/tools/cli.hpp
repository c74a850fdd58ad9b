#pragma once

#include <string>
#include <vector>

namespace twotier::cli {

// Full command-line entry point (subcommand dispatch). Returns the
// process exit code: 0 success, 1 verification failure, 2 invalid input.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without program name

}  // namespace twotier::cli
