#pragma once

namespace mdd {

// Parses argv into a RunConfig and dispatches run_experiment.
// Exit codes: 0 success, 2 usage/config error, 3 numeric guard trip.
int run_cli(int argc, char** argv);

}  // namespace mdd
