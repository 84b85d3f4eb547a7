#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "pathkf/core.hpp"
#include "pathkf/models.hpp"

namespace pathkf::pkf {

/// Convex weights on the data, the internal model and the previous filter path.
struct PkfWeights {
  double w_data = 1.0;
  double w_model = 0.0;
  double w_filter = 0.0;
};

/// One pass of the filter over the whole path.
struct PkfState {
  std::size_t iteration = 0;
  Trajectory filter;
  std::vector<double> process_uncertainty;
  std::vector<PkfWeights> weights;
};

struct ConvergenceTrace {
  std::vector<double> max_abs_dq;           // max_t |Q^i_t - Q^{i-1}_t|, one per iteration
  std::vector<double> max_filter_variance;  // max_t V(F^i_t)
};

struct PkfResult {
  PkfState final;
  std::vector<PkfState> history;  // iterations 1..I when retained
  ConvergenceTrace convergence;
};

struct PkfOptions {
  std::size_t iterations = 10;
  bool retain_history = false;
  /// Stop once max_t |dQ| / (max_t Q + floor) drops below this; 0 disables.
  double early_stop_tolerance = 0.0;
};

/// Variance-minimizing weights for previous-filter variance A, model plus
/// process variance B and data variance C:
///   w_data = AB/S, w_model = AC/S, w_filter = BC/S, S = AB + BC + CA.
/// An all-zero denominator yields uniform weights.
PkfWeights pkf_weights(double v_filter_prev, double v_model_plus_q, double v_data);

/// Q + (w_data + w_model)(loss - Q).
double update_process_uncertainty(double q_prev, double w_data, double w_model, double loss);

struct PkfStepResult {
  GaussianEstimate estimate;
  PkfWeights weights;
  double process_uncertainty = 0.0;
};

/// Three-way update of one point: weights from the variances, the convex
/// mean, the quadratic variance combination and the process-uncertainty
/// update with loss (E(M) - E(Z))^2. `prev_filter.variance` may be zero.
PkfStepResult pkf_update(const GaussianEstimate& prev_filter, double q_prev,
                         const GaussianEstimate& data, const models::ModelPrediction& model);

/// Filter update at point `t` against the previous pass `prev`.
PkfStepResult pkf_step(const PkfState& prev, std::size_t t, const GaussianEstimate& data,
                       const models::ModelPrediction& model);

/// Iteration 0 of the filter: the path equals the data and Q equals V(Z).
PkfState initial_state(const TimeSeriesData& data);

PkfResult run_pkf(const TimeSeriesData& data, const models::InternalModel& model,
                  const PkfOptions& options = {});
PkfResult run_pkf(const TimeSeriesData& data, models::ModelKind kind,
                  const PkfOptions& options = {});

enum class RegimeLabel {
  AccurateModelReliableData,
  InaccurateModelReliableData,
  AccurateModelNoisyData,
  InaccurateModelNoisyData,
};

std::string_view to_string(RegimeLabel label);

/// Quadrant of (process uncertainty, data variance); values equal to a
/// threshold count as high.
RegimeLabel classify_regime(double q, double v_data, double q_threshold, double v_threshold);

/// Per-timepoint regimes, thresholds defaulting to the series medians of Q and V(Z).
std::vector<RegimeLabel> classify_regimes(const PkfResult& result, const TimeSeriesData& data,
                                          std::optional<double> q_threshold = std::nullopt,
                                          std::optional<double> v_threshold = std::nullopt);

}  // namespace pathkf::pkf
