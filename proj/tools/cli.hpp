#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rse::cli {

// Exit codes; errors also print a one-line JSON object on the error stream.
enum ExitCode : int {
    kOk = 0,
    kValidationFailed = 1,
    kUsage = 2,
    kMalformedSpec = 3,
    kCapExceeded = 4,
    kInvariantViolation = 5,
    kDomain = 6,
    kOther = 7,
};

inline constexpr const char* kVersion = "0.1.0";

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rse::cli
