#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hmlam {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitBudget = 2,
  kExitInternal = 3,
};

// Runs one command line (without the program name). Human-readable output
// goes to out, diagnostics and usage to err.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hmlam
