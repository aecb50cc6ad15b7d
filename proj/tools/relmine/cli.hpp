#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace relmine::cli {

/// Runs one subcommand. `args` excludes the program name. Returns 0 on
/// success, 1 on invalid input or usage, 2 on a runtime failure.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace relmine::cli
