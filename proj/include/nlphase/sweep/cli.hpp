#pragma once

#include <ostream>

namespace nlphase::sweep {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariantFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Entry point of the `nlphase` executable. Results go to `out` unless --out
/// is given; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nlphase::sweep
