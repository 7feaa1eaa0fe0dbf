#pragma once

#include <iosfwd>

namespace wigner_align {

// Subcommands: phase, transpositions, concentration, theory-check, solve,
// sample. Every subcommand accepts --config FILE (JSON whose keys mirror the
// long flag names); flags given on the command line win.
//
// Exit codes: 0 success, 1 a reported check failed, 2 usage or input error.
int cli_main(int argc, char** argv);
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace wigner_align
