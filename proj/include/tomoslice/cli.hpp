#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tomoslice::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
/// Honest negative verdict: "reject" from detect, "none" from algfit.
inline constexpr int kExitNegative = 2;

/// Runs `tomoslice <command> [flags]`. args excludes the program name. Reports go to
/// --out when given, otherwise to out; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tomoslice::cli
