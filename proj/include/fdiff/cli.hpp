#pragma once

#include "fdiff/report.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace fdiff {

/// Parses a command line (without the program name) and runs it, returning
/// the report instead of printing it. verify-paper is not available here.
Report invoke(const std::vector<std::string>& argv);

/// Entry point of the fdiff tool. Human output goes to out, errors to err,
/// the machine report to the --machine-output file when given.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

/// Splits a directive command line on blanks; double quotes group words.
std::vector<std::string> split_command(const std::string& line);

}  // namespace fdiff
