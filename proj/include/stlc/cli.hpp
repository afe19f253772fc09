#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stlc::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kDiverged = 3,
};

// Subcommands: gen, typecheck, encode, decode, eval, optsim. Machine-readable
// output goes to `out` (or --out paths), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stlc::cli
