#pragma once

#include <iosfwd>

namespace attnboost {

/// Entry point behind the `attnboost` binary. Returns 0 on success, 1 on a
/// runtime or data error, 2 on a usage error (usage text goes to `err`).
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace attnboost
