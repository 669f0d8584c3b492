#pragma once

namespace ovp {

// Subcommands synth, plan, baseline, evaluate. Returns the process exit
// code: 0 success, 1 I/O, 2 validation, 3 infeasible.
int run_cli(int argc, char** argv);

}  // namespace ovp
