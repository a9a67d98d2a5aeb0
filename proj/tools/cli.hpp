#pragma once

#include <iosfwd>

namespace vlmkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `vlmkit` tool. Data goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace vlmkit::cli
