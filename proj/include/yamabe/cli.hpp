#pragma once

#include <string>
#include <vector>

namespace yamabe::cli {

// Exit codes: 0 success, 1 computation failed (partial report retained),
// 2 invalid configuration.
int run(const std::vector<std::string>& args);

} // namespace yamabe::cli
