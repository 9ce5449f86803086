#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cubesolve {

// Command-line driver.  Subcommands:
//   solve FILE      search for solutions to the file's goals
//   check FILE      verify solutions provided inline in the file
//   bench DIR       run every .cube file under DIR against expectations
//   gen-group FILE  encode a group presentation as a .cube context
// Returns 0 when everything requested was solved or verified, 1 when some
// goal went unsolved or failed verification, 2 on input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace cubesolve
