#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pathkf/baselines.hpp"
#include "pathkf/core.hpp"
#include "pathkf/models.hpp"
#include "pathkf/pkf.hpp"
#include "pathkf/synth.hpp"

namespace pathkf::bench {

/// (1/T) sum_t (E(F_t) - N(t))^2. Throws InvalidData on a grid mismatch.
double mse(const Trajectory& filter, const GroundTruth& truth);

/// Per-timepoint squared errors whose mean is mse().
std::vector<double> squared_errors(const Trajectory& filter, const GroundTruth& truth);

enum class Method { PKF, AdaptiveKF, UnscentedKF, UnscentedRTS, IPLS };

std::string_view to_string(Method method);

struct AlgorithmSpec {
  Method method = Method::PKF;
  double q = 1.0;              // baselines only
  std::size_t iterations = 1;  // PKF and IPLS
  baselines::UtParams ut;

  /// e.g. "ukf q=10" or "pkf iterations=10".
  std::string label() const;
};

/// Every row of the published comparison table: two q values for each
/// single-pass baseline, the four IPLS (q, iterations) pairs, and PKF with
/// 1 and 10 iterations.
std::vector<AlgorithmSpec> table2_specs();

Trajectory run_spec(const AlgorithmSpec& spec, const TimeSeriesData& data, models::ModelKind kind);

struct BenchmarkRow {
  AlgorithmSpec spec;
  std::optional<Trajectory> trajectory;
  double mse = 0.0;
  std::vector<double> squared_error;
  std::string error;  // non-empty when the algorithm failed

  bool ok() const { return error.empty(); }
};

struct BenchmarkReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::optional<GroundTruth> truth;
  std::vector<BenchmarkRow> rows;
};

/// Runs every spec on the same simulated series. Failures stay in their row.
BenchmarkReport run_benchmark(const synth::SimulatedSeries& series,
                              const std::vector<AlgorithmSpec>& specs, models::ModelKind kind,
                              std::size_t jobs = 1);

/// Simulates the scenario once, then benchmarks it with the birth-death model.
BenchmarkReport run_benchmark(const synth::BirthDeathScenario& scenario,
                              const std::vector<AlgorithmSpec>& specs, std::size_t jobs = 1);

struct LabeledRun {
  std::string label;
  const pkf::PkfResult& result;
  const TimeSeriesData& data;
};

struct SeriesRatio {
  std::string series_id;
  std::string label;
  double mean_log_ratio = 0.0;      // mean_t ln(Q_t / V(Z_t)), both floored
  double mean_data_variance = 0.0;  // mean_t V(Z_t)
  std::size_t variance_decile = 0;  // 0..9 by rank of mean_data_variance
};

struct GroupRatio {
  std::string key;
  std::size_t count = 0;
  double mean_log_ratio = 0.0;
};

struct QRatioSummary {
  std::vector<SeriesRatio> series;
  std::vector<GroupRatio> by_label;           // in order of first appearance
  std::vector<GroupRatio> by_variance_decile; // non-empty deciles, ascending
};

/// mean_t ln(max(Q_t, floor) / max(V(Z_t), floor)).
double mean_log_ratio(const std::vector<double>& q, const std::vector<GaussianEstimate>& data);

QRatioSummary q_ratio_summary(const std::vector<LabeledRun>& runs);

}  // namespace pathkf::bench
