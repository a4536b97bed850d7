#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conglab::cli {

// argv-style entry point shared by the binary and the tests; args excludes
// the program name.  Exit codes: 0 everything checked out, 1 at least one
// check failed, 2 usage or runtime error, 3 nothing was evaluated.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}
