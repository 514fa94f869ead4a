#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ktower::cli {

enum ExitCode : int { kOk = 0, kInvalidInput = 1, kCheckFailed = 2, kUnproven = 3 };

/// Runs one command line (without the program name). Payloads for snf,
/// group, hom, exact, chern and JSON towers come from --input or `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace ktower::cli
