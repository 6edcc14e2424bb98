#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ambiglab::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kInconclusive = 2, kMalformed = 3 };

/// Runs the command line `args` (without the program name). Artifacts go to
/// the files named by --out or to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "3,4,7" or ranges such as "4-8" (and mixtures, "2,4-6").
std::vector<int> parse_index_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

/// Worker count: AMBIGLAB_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
int thread_cap();

}  // namespace ambiglab::cli
