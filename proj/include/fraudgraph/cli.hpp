#pragma once

#include <ostream>

namespace fraudgraph {

// Exit codes of the fraudgraph command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitValidation = 3;

// Runs one subcommand. Reports go to |out|, warnings and errors to |err|.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace fraudgraph
