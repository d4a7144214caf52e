// include/jgrscan/cli.hpp
#pragma once

#include <iosfwd>

namespace jgrscan {

/// Runs the `jgrscan` command line. Returns 0 when nothing was found, 1 when
/// findings (or diagnostics, for `validate`) are present and 2 on errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jgrscan
