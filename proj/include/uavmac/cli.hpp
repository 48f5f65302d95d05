#pragma once

#include <string>
#include <vector>

namespace uavmac::cli {

// Exit codes: 0 success, 2 config error, 3 solver failure,
// 4 acceptance-check failure (nesting violation).
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace uavmac::cli
