#pragma once

#include <iosfwd>

namespace blackjack {

/// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitEngineError = 1;
inline constexpr int kExitUsage = 2;

/// Command-line entry point. Subcommands: dealer-table, ev-table,
/// expected-win, removal-effects, estimate, advise, simulate, serve.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace blackjack
