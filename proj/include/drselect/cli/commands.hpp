#pragma once

namespace drselect::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitEstimation = 2;

// Subcommands: estimate, risk-grid, simulate, bootstrap-check.
int run(int argc, const char* const* argv);

}  // namespace drselect::cli
