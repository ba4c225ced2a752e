#pragma once

namespace porocomb {

/// Exit codes of the command-line interface.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,     // bad arguments or configuration
  kExitAudit = 2,     // hypothesis audit failed
  kExitSolver = 3,    // divergence, blow-up, or a violated solver bound
  kExitIo = 4,
};

/// Entry point behind the `porocomb` executable. Subcommands: simulate,
/// check-hypotheses, oracle-compare, dependence-study, front-track.
/// Output directory: -o, else $POROCOMB_OUTPUT_DIR, else ./porocomb_out.
int cli(int argc, const char* const* argv);

}  // namespace porocomb
