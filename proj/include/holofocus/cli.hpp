#pragma once

#include <iosfwd>

namespace holofocus::cli {

/// Entry point of the `holofocus` tool; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace holofocus::cli
