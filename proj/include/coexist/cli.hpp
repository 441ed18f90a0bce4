#ifndef COEXIST_CLI_HPP
#define COEXIST_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace coexist {

enum ExitCode : int {
    kExitOk = 0,
    kExitError = 1,        // config, model or I/O failure
    kExitUsage = 2,        // bad command line
    kExitInfeasible = 3,   // calibration window not attainable
};

/// Full command-line entry point. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coexist

#endif  // COEXIST_CLI_HPP
