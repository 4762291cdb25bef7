#pragma once

#include <iosfwd>

namespace covmeas {

/// Exit codes: 0 ok, 1 usage / config / failed check, 2 I/O.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitIo = 2;

/// Default output directory for simulate records when no path is given.
inline constexpr const char* kOutputDirEnv = "COVMEAS_OUTPUT_DIR";

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace covmeas
