#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace emailnet::cli {

// Runs one `emailnet` invocation. `args` excludes the program name. Returns
// the process exit code: 0 success, 1 usage, 2 I/O, 3 degenerate input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace emailnet::cli
