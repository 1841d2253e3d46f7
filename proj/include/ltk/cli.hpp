#ifndef LTK_CLI_HPP
#define LTK_CLI_HPP

#include <ostream>

namespace ltk {

/// Entry point of the `ltk` command.  Exit codes: 0 = admissible / theorem /
/// valid / success, 1 = the negative verdict, 2 = usage or input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ltk

#endif
