#pragma once
// Command-line front end: patch generation/verification/rendering, reduction
// reports, transition and atlas verification, kite symmetry equivalence.

#include <iosfwd>

namespace qk::cli {

// exit codes: 0 all checks pass, 1 check failures, 2 usage errors
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qk::cli
