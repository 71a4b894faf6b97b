#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace svstokes::cli {

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line. argv[0] is the program name. Reports go to `out`
/// (or to files under --out), warnings and errors to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace svstokes::cli
