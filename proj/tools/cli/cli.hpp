#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tagtrace::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Streams the command reads from and writes to; `in` backs `--input -`.
struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

/// Parses `args` (without the program name) and runs one subcommand.
/// Returns the process exit status; failures are reported on `err` as a
/// one-line JSON object.
int run(const std::vector<std::string>& args, Streams streams);

std::string version_string();

}  // namespace tagtrace::cli
