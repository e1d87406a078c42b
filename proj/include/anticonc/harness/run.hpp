#pragma once

#include <string>

#include "anticonc/harness/report.hpp"

namespace anticonc {

/// Dispatches to the named operation and fills the report (no file output).
RunReport run_experiment(const ExperimentConfig& config);

/// Writes the artifacts named by the config's `out` / `csv` keys and records
/// them in the report. `.csv` outputs take the data table, anything else the
/// JSON report.
void write_artifacts(RunReport& report);

inline constexpr const char* kSuites[] = {"concentration", "fourier", "counting", "matrix", "all"};

/// The inequality-verification battery for one suite with fixed seeds.
/// Throws ConfigError for an unknown suite.
RunReport verify_suite(const std::string& suite, std::uint64_t seed = 20240601);

/// Process exit code contract: 0 iff every check passed.
int exit_code(const RunReport& report);

}  // namespace anticonc
