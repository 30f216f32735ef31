#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lshape::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one subcommand (args exclude the program name). Results go to `out`, or to the
/// file named by --out; diagnostics go to `err`. Returns 0 on success, 1 on a usage
/// error (nothing written), 2 when a validation test rejects.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lshape::cli
