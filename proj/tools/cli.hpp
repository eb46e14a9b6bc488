#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace csit::cli {

enum ExitCode { ok = 0, config_failure = 1, numerical_failure = 2, verification_failure = 3 };

/// Parses `lo:hi:step` (inclusive of hi up to rounding) or a single number.
std::vector<double> parse_grid(const std::string& text);

/// Entry point shared by the executable and the tests. Artifacts named
/// "-" (the default) go to `out`; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace csit::cli
