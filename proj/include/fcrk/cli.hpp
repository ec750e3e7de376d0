#pragma once

#include <iosfwd>

namespace fcrk {

/// Entry point of the `fcrk` tool. Exit codes: 0 success (for `check`: the
/// claimed order is certified), 1 integration failure or uncertified order,
/// 2 usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fcrk
