#pragma once

#include <iosfwd>

namespace rgroups {

inline constexpr int kCliSchemaVersion = 1;

// Entry point of the rgroups binary. Exit status: 0 success, 1 runtime
// failure or a negative result under an assertion flag (certify
// --require-bound), 2 usage errors.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rgroups
