#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "conelab/json_io.hpp"

namespace conelab {

enum ExitCode : int { kExitOk = 0, kExitVerdict = 1, kExitUsage = 2, kExitGuard = 3 };

// args excludes the program name. The report goes to `out` (or the --out file);
// usage text and diagnostics go to `err`.
int runCommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parses "r1;r2;..." where each ray is a csv list of rationals.
std::vector<VectorQ> parseRayList(const std::string& text);

}  // namespace conelab
