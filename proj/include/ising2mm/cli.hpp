#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ising2mm {

inline constexpr const char* kSchema = "ising2mm/1";

// Runs the command line in-process. Exit codes: 0 success, 1 failed certificate,
// 2 domain/classification error or malformed arguments.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

// %.17g, the shortest form that always round-trips a double.
std::string format_double(double x);

}  // namespace ising2mm
