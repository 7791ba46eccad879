#pragma once

#include <string>
#include <vector>

namespace placement::cli {

/// Exit codes: 0 success, 1 runtime error, 2 usage error.
int dispatch(int argc, char** argv);
int dispatch(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace placement::cli
