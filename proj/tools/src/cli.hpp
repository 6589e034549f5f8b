#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace peergroup::cli {

// Runs one command line (without the program name). Returns the process exit
// code: 0 success, 1 user or configuration error, 2 internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Directory used when --out is omitted: $PEERGROUP_RUN_DIR/<command>.
inline constexpr const char* kRunDirVariable = "PEERGROUP_RUN_DIR";

}  // namespace peergroup::cli
