#pragma once

#include <iosfwd>

namespace airseg::cli {

/// Entry point of the `airseg` tool. Returns the process exit code:
/// 0 on success or --help, 1 when processing fails, 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace airseg::cli
