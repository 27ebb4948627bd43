#pragma once

// Command dispatch: runs one configured experiment and writes its CSV files
// and manifest.json into an output directory.

#include "pslab/config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace pslab {

inline constexpr const char* kVersion = "1.0.0";

struct RunOutcome {
  nlohmann::json manifest;
  std::vector<std::string> files;
};

/// Runs config.command with the given worker count. Files are written into
/// outDir (created if needed). Throws pslab::Error on failure.
RunOutcome runConfig(const RunConfig& config, const std::string& outDir, int workers);

/// Machine-readable record {error, message[, path]} for a failure.
nlohmann::json errorRecord(const std::exception& e);

/// Process exit status for a failure: 2 for configuration errors, 3 for other
/// library errors, 1 otherwise.
int exitCodeFor(const std::exception& e);

/// 17 significant digits.
std::string formatReal(double v);

}  // namespace pslab
