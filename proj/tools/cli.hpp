#pragma once

// Command-line front end: `okd rate|sweep|constants|simulate ...`.
//
// Exit codes: 0 success, 2 invalid flags or unsupported request,
// 3 numerical non-convergence, 4 Monte Carlo disagreement (simulate).

#include <iosfwd>
#include <span>
#include <string>

namespace okd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitDisagreement = 4;

/// Runs one invocation. `args` excludes the program name. Results go to
/// `out` (or to --output), diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace okd::cli
