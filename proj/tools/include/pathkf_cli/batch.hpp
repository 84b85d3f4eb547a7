#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathkf/core.hpp"
#include "pathkf/pkf.hpp"
#include "pathkf_cli/config.hpp"

namespace pathkf::cli {

struct SeriesOutcome {
  std::string series_id;
  std::optional<pkf::PkfResult> pkf;     // set when the algorithm is the PKF
  std::optional<Trajectory> trajectory;  // set for the baselines
  std::string error;

  bool ok() const { return error.empty(); }
};

struct BatchResult {
  std::vector<SeriesOutcome> outcomes;  // input order
  std::size_t failures = 0;
};

/// Runs the configured algorithm on every series with `config.jobs` workers.
/// Per-series failures are recorded, never thrown.
BatchResult batch_run(const RunConfig& config, models::ModelKind model,
                      const std::vector<TimeSeriesData>& series);

/// Results, failures and skipped ids. Independent of the worker count.
nlohmann::ordered_json to_json(const BatchResult& result, const std::vector<std::string>& skipped);

}  // namespace pathkf::cli
