#pragma once

#include <iosfwd>

namespace runge::cli {

// Exit codes: 0 success, 1 hypothesis failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace runge::cli
