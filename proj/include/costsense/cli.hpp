#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace costsense::cli {

// Runs one costsense command. Machine-readable output goes to `out`,
// progress lines, warnings and errors to `err`.
// Returns 0 on success, 1 for data, contract, numeric or load errors, and 2
// for usage errors (unknown flags, missing arguments, bad option values).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace costsense::cli
