#ifndef IRVOL_CLI_HPP
#define IRVOL_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace irvol {

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitIo = 1, kExitValidation = 2, kExitNumerical = 3 };

/// Entry point of the `irvol` executable. Subcommands: simulate, fit,
/// refresh, forecast, compare, replay.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with arguments after the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args);

}  // namespace irvol

#endif  // IRVOL_CLI_HPP
