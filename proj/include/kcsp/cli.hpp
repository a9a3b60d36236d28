#pragma once

namespace kcsp {

// Entry point behind the kcsp binary; returns the process exit code
// (0 success, 1 verification failure, 2 usage/parse error).
int cli_run(int argc, const char* const* argv);

}  // namespace kcsp
