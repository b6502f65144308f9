#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rftap::cli {

// Runs one command. `args` excludes the program name. Returns the exit code:
// 0 on success, 2 when the analysis answers "no" (NRA fails, no pricing
// system, not replicable, incomplete, certificate rejected), 1 on bad input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rftap::cli
