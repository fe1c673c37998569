#ifndef LMDPP_CLI_HPP
#define LMDPP_CLI_HPP

#include <iosfwd>

namespace lmdpp {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the `lmdpp` command line. Diagnostics go to `err`, reports to `out`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lmdpp

#endif  // LMDPP_CLI_HPP
