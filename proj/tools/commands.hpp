#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twirl::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kCertificateFailure = 3 };

/// Runs one command line (without the program name). Results go to `out`
/// (or to --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twirl::cli
