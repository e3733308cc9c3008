#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace normform::cli {

// Exit codes: 0 success, 1 self-test failure or internal error, 2 validation error, 3 budget exceeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace normform::cli
