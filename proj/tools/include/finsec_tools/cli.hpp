#pragma once

#include <ostream>

namespace finsec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDisagree = 1;
inline constexpr int kExitUnstable = 2;
inline constexpr int kExitInconclusive = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitCapacity = 65;
inline constexpr int kExitInternal = 70;

/// Runs one subcommand. The report goes to `out` as JSON, diagnostics to
/// `err`; artifacts are written under --out (default "finsec_out").
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace finsec::cli
