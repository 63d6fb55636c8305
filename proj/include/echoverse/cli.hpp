#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace echoverse::cli {

/// Exit codes of the tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;   // validation found failing invariants
inline constexpr int kExitConfig = 2;    // unparseable or inconsistent input
inline constexpr int kExitNumerical = 3; // numerical failure during a run

/// Entry point shared by the binary and the tests. Streams receive what the
/// binary would print to stdout/stderr.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace echoverse::cli
