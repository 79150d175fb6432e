#pragma once

#include <iosfwd>

namespace stroh::cli {

// Exit codes: 0 success, 2 validation error, 3 numerical-domain error.
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stroh::cli
