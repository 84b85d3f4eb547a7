#include "pathkf/pkf.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace pathkf::pkf {

namespace {

double median(std::vector<double> values) {
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

PkfWeights pkf_weights(double a, double b, double c) {
  if (a < 0.0 || b < 0.0 || c < 0.0 || !std::isfinite(a) || !std::isfinite(b) ||
      !std::isfinite(c)) {
    throw InvalidParameter("pkf weights need finite non-negative variances");
  }
  const double ab = a * b;
  const double ac = a * c;
  const double bc = b * c;
  const double s = ab + bc + ac;
  if (!(s > 0.0)) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return {ab / s, ac / s, bc / s};
}

double update_process_uncertainty(double q_prev, double w_data, double w_model, double loss) {
  const double gain = w_data + w_model;
  return q_prev + gain * (loss - q_prev);
}

PkfStepResult pkf_update(const GaussianEstimate& prev_filter, double q_prev,
                         const GaussianEstimate& data, const models::ModelPrediction& model) {
  const double a = prev_filter.variance;
  const double b = model.estimate.variance + q_prev;
  const double c = data.variance;
  const PkfWeights w = pkf_weights(a, b, c);

  PkfStepResult out;
  out.weights = w;
  out.estimate.mean = w.w_data * data.mean + w.w_model * model.estimate.mean +
                      w.w_filter * prev_filter.mean;
  out.estimate.variance = w.w_data * w.w_data * c + w.w_model * w.w_model * b +
                          w.w_filter * w.w_filter * a;
  const double miss = model.estimate.mean - data.mean;
  out.process_uncertainty = update_process_uncertainty(q_prev, w.w_data, w.w_model, miss * miss);
  return out;
}

PkfStepResult pkf_step(const PkfState& prev, std::size_t t, const GaussianEstimate& data,
                       const models::ModelPrediction& model) {
  return pkf_update(prev.filter[t], prev.process_uncertainty[t], data, model);
}

PkfState initial_state(const TimeSeriesData& data) {
  auto estimates = data.summarize();
  std::vector<double> q(estimates.size());
  std::transform(estimates.begin(), estimates.end(), q.begin(),
                 [](const GaussianEstimate& e) { return e.variance; });
  return PkfState{0, Trajectory(data.grid(), std::move(estimates)), std::move(q),
                  std::vector<PkfWeights>(data.size())};
}

PkfResult run_pkf(const TimeSeriesData& data, const models::InternalModel& model,
                  const PkfOptions& options) {
  if (options.iterations < 1) throw InvalidParameter("pkf needs at least one iteration");
  const std::size_t n = data.size();
  const auto observed = data.summarize();

  PkfState state = initial_state(data);
  PkfResult result{state, {}, {}};
  if (options.retain_history) result.history.reserve(options.iterations);

  std::vector<GaussianEstimate> filter(n);
  std::vector<double> q(n);
  std::vector<PkfWeights> weights(n);

  for (std::size_t i = 1; i <= options.iterations; ++i) {
    double max_dq = 0.0;
    double max_q = 0.0;
    double max_v = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      models::ModelPrediction m;
      try {
        m = model.predict(state.filter, t);
      } catch (const DegeneratePosterior& e) {
        throw DegeneratePosterior("series '" + data.series_id() + "', iteration " +
                                  std::to_string(i) + ", timepoint " + std::to_string(t) +
                                  " (t=" + std::to_string(data.grid()[t]) + "): " + e.what());
      }
      const PkfStepResult step = pkf_step(state, t, observed[t], m);
      // Stored paths keep the variance floor; the recursion V <- w_f V is
      // non-increasing, so the clamp never reverses the iteration order.
      filter[t] = {step.estimate.mean, std::max(step.estimate.variance, kVarianceFloor)};
      q[t] = step.process_uncertainty;
      weights[t] = step.weights;
      max_dq = std::max(max_dq, std::abs(q[t] - state.process_uncertainty[t]));
      max_q = std::max(max_q, q[t]);
      max_v = std::max(max_v, filter[t].variance);
    }
    state = PkfState{i, Trajectory(data.grid(), filter), q, weights};
    result.convergence.max_abs_dq.push_back(max_dq);
    result.convergence.max_filter_variance.push_back(max_v);
    if (options.retain_history) result.history.push_back(state);

    if (options.early_stop_tolerance > 0.0 &&
        max_dq / (max_q + kVarianceFloor) < options.early_stop_tolerance) {
      break;
    }
  }
  result.final = std::move(state);
  return result;
}

PkfResult run_pkf(const TimeSeriesData& data, models::ModelKind kind, const PkfOptions& options) {
  return run_pkf(data, models::SplineModel(kind), options);
}

std::string_view to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::AccurateModelReliableData: return "accurate-model-reliable-data";
    case RegimeLabel::InaccurateModelReliableData: return "inaccurate-model-reliable-data";
    case RegimeLabel::AccurateModelNoisyData: return "accurate-model-noisy-data";
    case RegimeLabel::InaccurateModelNoisyData: return "inaccurate-model-noisy-data";
  }
  return "unknown";
}

RegimeLabel classify_regime(double q, double v_data, double q_threshold, double v_threshold) {
  if (!(q_threshold > 0.0) || !(v_threshold > 0.0)) {
    throw InvalidParameter("regime thresholds must be positive");
  }
  const bool high_q = q >= q_threshold;
  const bool high_v = v_data >= v_threshold;
  if (high_v) {
    return high_q ? RegimeLabel::InaccurateModelNoisyData : RegimeLabel::AccurateModelNoisyData;
  }
  return high_q ? RegimeLabel::InaccurateModelReliableData
                : RegimeLabel::AccurateModelReliableData;
}

std::vector<RegimeLabel> classify_regimes(const PkfResult& result, const TimeSeriesData& data,
                                          std::optional<double> q_threshold,
                                          std::optional<double> v_threshold) {
  const auto& q = result.final.process_uncertainty;
  const auto observed = data.summarize();
  if (q.size() != observed.size()) throw InvalidData("result and data lengths differ");

  std::vector<double> v(observed.size());
  std::transform(observed.begin(), observed.end(), v.begin(),
                 [](const GaussianEstimate& e) { return e.variance; });
  const double qt = std::max(q_threshold.value_or(median(q)), kVarianceFloor);
  const double vt = std::max(v_threshold.value_or(median(v)), kVarianceFloor);

  std::vector<RegimeLabel> out(q.size());
  for (std::size_t t = 0; t < q.size(); ++t) out[t] = classify_regime(q[t], v[t], qt, vt);
  return out;
}

}  // namespace pathkf::pkf
