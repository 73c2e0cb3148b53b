#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qfactor::cli {

enum ExitCode : int {
    kOk = 0,
    kParseError = 2,
    kDomainError = 3,
    kDiverged = 4,
};

// args excludes the program name. CSV goes to `out` unless --out is given;
// diagnostics go to `err`. Bad flags count as a parse error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfactor::cli
