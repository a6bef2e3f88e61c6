#pragma once

namespace partinv {

/// Command-line entry point shared by the partinv tool and the test suite.
/// Subcommands: phase-diagram, l-sensitivity, best-l, wavelet, recover,
/// correlation-map, check-theorem. Returns 0 on success, 2 on configuration
/// errors (including unknown flags), 1 on runtime errors.
int run_cli(int argc, const char* const* argv);

}  // namespace partinv
