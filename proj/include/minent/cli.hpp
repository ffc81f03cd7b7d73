#pragma once

#include <string>
#include <vector>

namespace minent {

// Command-line front end. Returns the process exit code:
//   0 success, 2 invalid input, 3 numerical warnings escalated by --strict.
int run(int argc, const char* const* argv);

// Same, for tests: args exclude the program name.
int run(const std::vector<std::string>& args);

}  // namespace minent
