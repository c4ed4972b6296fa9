#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bratteli {

/// Runs one subcommand. `args` excludes the program name. Returns the exit
/// code: 0 on success, 1 on a domain error (one line on `err` naming the
/// invariant), 2 on a parse error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bratteli
