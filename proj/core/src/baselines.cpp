#include "pathkf/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace pathkf::baselines {

using models::ModelKind;

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::AdaptiveKF: return "kf";
    case Algorithm::UnscentedKF: return "ukf";
    case Algorithm::UnscentedRTS: return "urts";
    case Algorithm::IPLS: return "ipls";
  }
  return "unknown";
}

SigmaPoints make_sigma_points(const GaussianEstimate& input, const UtParams& p) {
  constexpr double n = 1.0;
  const double lambda = p.alpha * p.alpha * (n + p.kappa) - n;
  const double c = n + lambda;
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidParameter("unscented parameters give a non-positive sigma-point scale");
  }
  if (!(input.variance >= 0.0)) throw InvalidParameter("sigma points need a non-negative variance");

  const double spread = std::sqrt(c * input.variance);
  const double wi = 0.5 / c;
  const double wm0 = lambda / c;
  return SigmaPoints{{input.mean, input.mean + spread, input.mean - spread},
                     {wm0, wi, wi},
                     {wm0 + (1.0 - p.alpha * p.alpha + p.beta), wi, wi}};
}

UnscentedMoments unscented_moments(const GaussianEstimate& input,
                                   const std::function<double(double)>& f, const UtParams& p) {
  const SigmaPoints sp = make_sigma_points(input, p);
  double y[3];
  double mean = 0.0;
  for (int i = 0; i < 3; ++i) {
    y[i] = f(sp.points[static_cast<std::size_t>(i)]);
    mean += sp.mean_weights[static_cast<std::size_t>(i)] * y[i];
  }
  UnscentedMoments out;
  out.mean = mean;
  for (std::size_t i = 0; i < 3; ++i) {
    const double dy = y[i] - mean;
    out.variance += sp.cov_weights[i] * dy * dy;
    out.cross_covariance += sp.cov_weights[i] * (sp.points[i] - input.mean) * dy;
  }
  if (!std::isfinite(out.mean) || !std::isfinite(out.variance)) {
    throw NumericalOverflow("unscented transform produced non-finite moments");
  }
  return out;
}

GaussianEstimate unscented_transform(const GaussianEstimate& input,
                                     const std::function<double(double)>& f, const UtParams& p) {
  const UnscentedMoments m = unscented_moments(input, f, p);
  return {m.mean, std::max(m.variance, kVarianceFloor)};
}

AffineDynamics::AffineDynamics(std::vector<double> slopes, std::vector<double> intercepts)
    : slopes_(std::move(slopes)), intercepts_(std::move(intercepts)) {
  if (slopes_.size() != intercepts_.size()) {
    throw InvalidParameter("affine dynamics needs matching slope/intercept sequences");
  }
}

double AffineDynamics::propagate(std::size_t to, double x, std::span<const double>) const {
  if (to == 0 || to > slopes_.size()) throw InvalidParameter("affine dynamics step out of range");
  return slopes_[to - 1] * x + intercepts_[to - 1];
}

WindowFlowDynamics::WindowFlowDynamics(ModelKind kind, TimeGrid grid, models::ScanConfig scan)
    : kind_(kind), grid_(std::move(grid)), scan_(scan) {}

double WindowFlowDynamics::propagate(std::size_t to, double x,
                                     std::span<const double> reference) const {
  if (to == 0 || to >= grid_.size()) throw InvalidParameter("flow dynamics step out of range");
  if (to == 1) return x;

  const models::Window w = models::make_window(kind_, grid_, to - 2, reference[to - 2], to - 1,
                                               reference[to - 1], to, GaussianEstimate{});
  const auto pos = models::FitPosition::RightEndpoint;
  const double dt = grid_[to] - grid_[to - 1];
  if (kind_ == ModelKind::BirthDeath) {
    // The flow is linear in the state, so scaling the unit flow covers x <= 0 too.
    const double k_birth = models::solve_k_birth(0.0, w, pos);
    return x * models::flow_birth_death(1.0, k_birth, 0.0, dt);
  }
  const models::SplinePosterior prior = models::scan_splines(w, kind_, pos, scan_);
  double sum = 0.0;
  for (std::size_t j = 0; j < prior.k1_grid.size(); ++j) {
    sum += prior.weights[j] * models::flow_const_reg(x, prior.k2_values[j], prior.k1_grid[j], dt);
  }
  return sum;
}

double kf_gain(double v_model_plus_q, double v_data) {
  const double s = v_model_plus_q + v_data;
  if (!(s > 0.0)) return 0.5;
  return v_model_plus_q / s;
}

Trajectory run_adaptive_kf(const TimeSeriesData& data, ModelKind kind, double q) {
  if (!(q >= 0.0) || !std::isfinite(q)) throw InvalidParameter("q must be finite and >= 0");
  const auto observed = data.summarize();
  const auto& grid = data.grid();
  const std::size_t n = data.size();

  std::vector<GaussianEstimate> out(n);
  out[0] = observed[0];
  for (std::size_t t = 1; t < n; ++t) {
    GaussianEstimate model{out[t - 1].mean, kVarianceFloor};
    if (t >= 2) {
      const models::Window w = models::make_window(kind, grid, t - 2, out[t - 2].mean, t - 1,
                                                   out[t - 1].mean, t, observed[t]);
      try {
        model = models::posterior_moments(
                    models::fit_spline_posterior(w, kind, models::FitPosition::RightEndpoint))
                    .estimate;
      } catch (const DegeneratePosterior& e) {
        throw DegeneratePosterior("adaptive KF at timepoint " + std::to_string(t) + ": " +
                                  e.what());
      }
    }
    const double b = model.variance + q;
    const double c = observed[t].variance;
    const double w = kf_gain(b, c);
    out[t] = make_estimate(w * observed[t].mean + (1.0 - w) * model.mean,
                           w * w * c + (1.0 - w) * (1.0 - w) * b);
  }
  return Trajectory(grid, std::move(out));
}

namespace {

/// Transition moments of step t-1 -> t given the posterior at t-1.
using TransitionFn = std::function<UnscentedMoments(std::size_t to, const GaussianEstimate& prev,
                                                    std::span<const double> reference)>;

struct ForwardPass {
  std::vector<GaussianEstimate> filtered;
  std::vector<GaussianEstimate> predicted;  // index t holds the prediction for t (t >= 1)
  std::vector<double> cross;                // Cov(x_{t-1}, x_t^-) at index t
};

ForwardPass forward_filter(const std::vector<GaussianEstimate>& observed,
                           const TransitionFn& transition, double q,
                           std::span<const double> fixed_reference) {
  const std::size_t n = observed.size();
  ForwardPass fp;
  fp.filtered.resize(n);
  fp.predicted.resize(n);
  fp.cross.assign(n, 0.0);
  std::vector<double> running(n, 0.0);

  fp.filtered[0] = observed[0];
  running[0] = observed[0].mean;
  for (std::size_t t = 1; t < n; ++t) {
    const std::span<const double> ref =
        fixed_reference.empty() ? std::span<const double>(running) : fixed_reference;
    const UnscentedMoments m = transition(t, fp.filtered[t - 1], ref);
    const double p_pred = std::max(m.variance, 0.0) + q;
    fp.predicted[t] = {m.mean, std::max(p_pred, kVarianceFloor)};
    fp.cross[t] = m.cross_covariance;

    const double r = observed[t].variance;
    const double gain = fp.predicted[t].variance / (fp.predicted[t].variance + r);
    const double mean = m.mean + gain * (observed[t].mean - m.mean);
    const double var = (1.0 - gain) * fp.predicted[t].variance;
    fp.filtered[t] = make_estimate(mean, var);
    running[t] = mean;
  }
  return fp;
}

std::vector<GaussianEstimate> rts_smooth(const ForwardPass& fp) {
  const std::size_t n = fp.filtered.size();
  std::vector<GaussianEstimate> smoothed(n);
  smoothed[n - 1] = fp.filtered[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) {
    const GaussianEstimate& pred = fp.predicted[k + 1];
    const double g = fp.cross[k + 1] / pred.variance;
    const double mean = fp.filtered[k].mean + g * (smoothed[k + 1].mean - pred.mean);
    const double var =
        fp.filtered[k].variance + g * g * (smoothed[k + 1].variance - pred.variance);
    smoothed[k] = make_estimate(mean, std::max(var, kVarianceFloor));
  }
  return smoothed;
}

TransitionFn unscented_transition(const Dynamics& dynamics, const UtParams& ut) {
  return [&dynamics, ut](std::size_t to, const GaussianEstimate& prev,
                         std::span<const double> reference) {
    return unscented_moments(
        prev, [&](double x) { return dynamics.propagate(to, x, reference); }, ut);
  };
}

void check_q(double q) {
  if (!(q >= 0.0) || !std::isfinite(q)) throw InvalidParameter("q must be finite and >= 0");
}

}  // namespace

Trajectory run_ukf(const TimeSeriesData& data, const Dynamics& dynamics, double q,
                   const UtParams& ut) {
  check_q(q);
  const ForwardPass fp = forward_filter(data.summarize(), unscented_transition(dynamics, ut), q, {});
  return Trajectory(data.grid(), fp.filtered);
}

Trajectory run_ukf(const TimeSeriesData& data, ModelKind kind, double q, const UtParams& ut) {
  return run_ukf(data, WindowFlowDynamics(kind, data.grid()), q, ut);
}

Trajectory run_urts(const TimeSeriesData& data, const Dynamics& dynamics, double q,
                    const UtParams& ut) {
  check_q(q);
  const ForwardPass fp = forward_filter(data.summarize(), unscented_transition(dynamics, ut), q, {});
  return Trajectory(data.grid(), rts_smooth(fp));
}

Trajectory run_urts(const TimeSeriesData& data, ModelKind kind, double q, const UtParams& ut) {
  return run_urts(data, WindowFlowDynamics(kind, data.grid()), q, ut);
}

Trajectory run_ipls(const TimeSeriesData& data, const Dynamics& dynamics, double q,
                    std::size_t iterations, const UtParams& ut) {
  check_q(q);
  if (iterations < 1) throw InvalidParameter("IPLS needs at least one iteration");
  const auto observed = data.summarize();
  const std::size_t n = observed.size();

  std::vector<GaussianEstimate> smoothed =
      rts_smooth(forward_filter(observed, unscented_transition(dynamics, ut), q, {}));

  struct Linearization {
    double slope = 1.0;
    double intercept = 0.0;
    double residual = 0.0;
  };
  std::vector<Linearization> lin(n);
  std::vector<double> reference(n);

  for (std::size_t it = 1; it < iterations; ++it) {
    for (std::size_t t = 0; t < n; ++t) reference[t] = smoothed[t].mean;
    // Statistical linear regression of each transition around the smoothed
    // posterior of its source point.
    for (std::size_t t = 1; t < n; ++t) {
      const GaussianEstimate& src = smoothed[t - 1];
      const UnscentedMoments m = unscented_moments(
          src, [&](double x) { return dynamics.propagate(t, x, reference); }, ut);
      Linearization& l = lin[t];
      l.slope = m.cross_covariance / src.variance;
      l.intercept = m.mean - l.slope * src.mean;
      l.residual = std::max(m.variance - l.slope * l.slope * src.variance, 0.0);
    }
    const TransitionFn linear = [&lin](std::size_t to, const GaussianEstimate& prev,
                                       std::span<const double>) {
      const Linearization& l = lin[to];
      return UnscentedMoments{l.slope * prev.mean + l.intercept,
                              l.slope * l.slope * prev.variance + l.residual,
                              l.slope * prev.variance};
    };
    smoothed = rts_smooth(forward_filter(observed, linear, q, reference));
  }
  return Trajectory(data.grid(), std::move(smoothed));
}

Trajectory run_ipls(const TimeSeriesData& data, ModelKind kind, double q, std::size_t iterations,
                    const UtParams& ut) {
  return run_ipls(data, WindowFlowDynamics(kind, data.grid()), q, iterations, ut);
}

Trajectory run_baseline(const BaselineConfig& config, const TimeSeriesData& data,
                        ModelKind kind) {
  switch (config.algorithm) {
    case Algorithm::AdaptiveKF: return run_adaptive_kf(data, kind, config.q);
    case Algorithm::UnscentedKF: return run_ukf(data, kind, config.q, config.ut);
    case Algorithm::UnscentedRTS: return run_urts(data, kind, config.q, config.ut);
    case Algorithm::IPLS: return run_ipls(data, kind, config.q, config.iterations, config.ut);
  }
  throw InvalidParameter("unknown baseline algorithm");
}

}  // namespace pathkf::baselines
