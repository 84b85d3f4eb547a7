#pragma once

#include <string>

#include "pathkf_cli/config.hpp"

namespace pathkf::cli {

enum ExitCode : int { kSuccess = 0, kPartialFailure = 1, kConfigError = 2 };

/// Each command returns an exit code; configuration, parse and I/O errors are
/// thrown for the caller to map to kConfigError.

/// Birth-death scenario (model birth-death) or gene panel (const-reg) to
/// series CSV, plus ground truth and, for the panel, labels.
int cmd_simulate(const RunConfig& config, const std::string& truth_path,
                 const std::string& labels_path);

/// One algorithm on every series of the input CSV.
int cmd_run(const RunConfig& config);

/// The full comparison table on the configured scenario. `traces_path`, when
/// set, receives per-row trajectories and squared errors as JSON.
int cmd_bench(const RunConfig& config, const std::string& traces_path);

/// PKF over a panel (input CSV or a simulated gene panel) plus the
/// log(Q / V(Z)) summary grouped by label and variance decile.
int cmd_batch(const RunConfig& config, const std::string& labels_path);

/// Per-iteration PKF traces.
int cmd_convergence(const RunConfig& config);

}  // namespace pathkf::cli
