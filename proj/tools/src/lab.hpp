#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace yamabe::lab {

// args excludes the program name. Returns the process exit code:
// 0 success, 1 invalid invocation or config, 2 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace yamabe::lab
