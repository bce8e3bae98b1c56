#pragma once

#include <iosfwd>

namespace opmatch::cli {

// Exit codes: 0 ok, 1 unexpected failure, 2 invalid input or parameters,
// 3 size limit or search budget, 4 oracle mismatch.
enum ExitCode : int { ok = 0, failure = 1, invalid = 2, budget = 3, mismatch = 4 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace opmatch::cli
