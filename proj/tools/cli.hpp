#pragma once

#include <iosfwd>

namespace locopath::cli {

// Full command-line front end, in-process so tests can drive it and capture
// output. Returns the process exit code: 0 success, 2 usage error, 1
// data/numeric error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace locopath::cli
