#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gazedyn::cli {

/// Runs the command line (args excludes the program name). Results go to
/// `out`, the resolved configuration and diagnostics to `err`. Returns the
/// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gazedyn::cli
