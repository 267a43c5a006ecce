#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace meshroute {

/// Entry point of the `meshroute` tool. `args` excludes the program name.
/// Returns the process exit code: 0 on success, 1 on runtime failures,
/// 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace meshroute
