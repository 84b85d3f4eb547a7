#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pathkf/bench.hpp"
#include "pathkf/core.hpp"
#include "pathkf/pkf.hpp"

namespace pathkf::cli {

struct SeriesTable {
  std::vector<TimeSeriesData> series;   // first-appearance order
  std::vector<std::string> skipped;     // ids with fewer than 3 timepoints
  std::size_t rows = 0;                 // data rows consumed
};

/// Long-format CSV with header `series_id,time,value`, one row per replicate.
SeriesTable parse_series_csv(std::istream& in);
SeriesTable read_series_csv(const std::filesystem::path& path);

void write_series_csv(std::ostream& out, const std::vector<TimeSeriesData>& series);
void write_series_csv(const std::filesystem::path& path, const std::vector<TimeSeriesData>& series);

/// `series_id,time,true_value`.
void write_truth_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, GroundTruth>>& truths);

/// `series_id,label` pairs.
void write_labels_csv(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& labels);
std::vector<std::pair<std::string, std::string>> read_labels_csv(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const Trajectory& trajectory);
nlohmann::ordered_json to_json(const pkf::PkfState& state);
nlohmann::ordered_json to_json(const pkf::PkfResult& result);
nlohmann::ordered_json to_json(const bench::QRatioSummary& summary);
Trajectory trajectory_from_json(const nlohmann::ordered_json& j);

void write_benchmark_csv(std::ostream& out, const bench::BenchmarkReport& report);

/// JSON for trajectories and filter results, CSV for benchmark reports.
/// Throws IoError when the file cannot be written.
void write_result(const pkf::PkfResult& result, const std::filesystem::path& path);
void write_result(const Trajectory& trajectory, const std::filesystem::path& path);
void write_result(const bench::BenchmarkReport& report, const std::filesystem::path& path);
void write_result(const bench::QRatioSummary& summary, const std::filesystem::path& path);

Trajectory read_trajectory_json(const std::filesystem::path& path);

/// Writes `text` to `path`, or to stdout when the path is "-".
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace pathkf::cli
