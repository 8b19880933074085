#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mrgnn {

/// Entry point of the mrgnn executable. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrgnn
