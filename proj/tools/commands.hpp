#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sobolev/config.hpp"

namespace sobolev::cli {

enum ExitCode : int { ok = 0, config_error = 1, non_convergence = 2, validation_failure = 3 };

int cmd_inner(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_minimize(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_trapped(const RunConfig& cfg, std::ostream& out);

/// Full command line (args[0] is the program name). Library errors are
/// mapped to exit codes with a diagnostic on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sobolev::cli
