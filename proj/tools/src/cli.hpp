#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qtwist::cli {

// Runs one command line (program name excluded). Results go to `out` unless
// --out names a file; diagnostics go to `err`. Returns the process exit code:
// 0 ok, 1 usage, 2 configuration, 3 budget.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qtwist::cli
