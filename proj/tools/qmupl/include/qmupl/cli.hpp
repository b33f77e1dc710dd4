#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmupl::cli {

enum ExitCode : int {
  ok = 0,
  usage = 1,
  schema = 2,
  numeric = 3,
  verify_failed = 4,
};

/// Runs the command line `args` (without the program name). Human-readable
/// output goes to `out`, diagnostics to `err`; errors are prefixed with
/// their category ("schema", "numeric", ...).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// SHA-1 of a git blob holding `content`, hex encoded.
std::string git_blob_sha1(const std::string& content);

}  // namespace qmupl::cli
