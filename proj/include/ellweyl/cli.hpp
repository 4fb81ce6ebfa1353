#ifndef ELLWEYL_CLI_HPP
#define ELLWEYL_CLI_HPP

#include <ostream>

namespace ellweyl
{

// Entry point of the ellweyl command line tool. Writes JSON to `out`,
// diagnostics to `err`; returns 0 on success (verification passed), 1 on
// domain errors or failed checks, 2 on malformed input.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace ellweyl

#endif
