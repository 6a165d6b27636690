#pragma once

#include <iosfwd>

namespace densevec::cli {

/// Entry point for the densevec command-line tool. Returns the process exit
/// status: 0 on success regardless of verdict, 2 on parse or usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace densevec::cli
