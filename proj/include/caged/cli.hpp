#pragma once

#include <iosfwd>

namespace caged {

/// Entry point of the `caged` tool. Exit codes: 0 success, 1 invalid input,
/// 2 a computed property that was asserted does not hold.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace caged
