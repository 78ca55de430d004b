#pragma once

#include <ostream>

namespace hmrf::cli {

/// Entry point shared by the executable and the tests. Exit codes: 0 holds or
/// success, 1 fails or invalid input, 2 inconclusive, 64 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hmrf::cli
