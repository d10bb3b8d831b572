#pragma once

#include <string>
#include <vector>

namespace vews::cli {

/// The vews command line: validate | stats | featurize | train | evaluate |
/// simulate | importance | rerun. Returns the process exit code:
/// 0 success, 1 usage error, 2 data error.
int run(const std::vector<std::string>& args);

}  // namespace vews::cli
