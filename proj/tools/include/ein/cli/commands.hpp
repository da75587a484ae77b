#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ein::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitPrecondition = 3;
inline constexpr int kExitProperty = 4;

/// Tool version embedded in every report.
const char* version();

/// Entry point of the `ein` tool. Reports go to files under --out when given,
/// otherwise to `out`; diagnostics go to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ein::cli
