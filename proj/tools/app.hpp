#pragma once

namespace jcpme::tools {

// Parses argv and runs the selected subcommand.  Returns the process exit
// code: 0 on success, 2 for configuration errors, 3 for numerical failures.
int run(int argc, const char* const* argv);

}  // namespace jcpme::tools
