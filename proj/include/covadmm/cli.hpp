#pragma once

#include <iosfwd>

namespace covadmm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;       // numerical failure inside a solver
inline constexpr int kExitUsage = 2;         // bad flags or unreadable / malformed input
inline constexpr int kExitNotConverged = 3;  // iteration cap reached

inline constexpr const char* kSchemaVersion = "1.0";

/// Entry point shared by the `covadmm` binary and the tests. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace covadmm::cli
