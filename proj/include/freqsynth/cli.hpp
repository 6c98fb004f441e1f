#pragma once

#include <iosfwd>

namespace freqsynth {

// Entry point of the freqsynth tool. Reports go to `out`, diagnostics to `err`.
// synth: 0 when the threshold is met, 1 when it is not; every command
// returns 2 on errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace freqsynth
