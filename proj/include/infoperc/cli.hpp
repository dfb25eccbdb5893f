#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace infoperc::cli {

inline constexpr std::uint64_t kDefaultSeed = 1234567;

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitBudget = 3,
    kExitViolation = 4,
};

/// Verify rows with slack below this count as violations.
inline constexpr double kSlackTolerance = 1e-10;

/// Runs one command line (without the program name). CSV goes to `out` unless --out
/// names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace infoperc::cli
