#pragma once

#include <iosfwd>
#include <string>

#include "aniso/config.hpp"
#include "aniso/error.hpp"

namespace aniso {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyViolation = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitNotApplicable = 4;

int exit_code_for(ErrorKind kind);

/// Runs one of thresholds | truncation-check | solve | stability | sweep.
/// The JSON report goes to `out`, diagnostics to `err`. When the config
/// names an output directory the report, any tables and field snapshots and
/// the resolved config are written there as well.
int run(const std::string& subcommand, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace aniso
