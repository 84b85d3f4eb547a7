#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "pathkf/core.hpp"
#include "pathkf/models.hpp"

namespace pathkf::baselines {

enum class Algorithm { AdaptiveKF, UnscentedKF, UnscentedRTS, IPLS };

std::string_view to_string(Algorithm algorithm);

/// Merwe scaled sigma-point parameters. For a scalar state alpha = 1 keeps
/// the outer points at +-sigma.
struct UtParams {
  double alpha = 1.0;
  double beta = 2.0;
  double kappa = 0.0;
};

struct BaselineConfig {
  Algorithm algorithm = Algorithm::AdaptiveKF;
  double q = 1.0;              // constant process uncertainty
  std::size_t iterations = 1;  // IPLS only
  UtParams ut;
};

struct SigmaPoints {
  std::vector<double> points;
  std::vector<double> mean_weights;
  std::vector<double> cov_weights;
};

SigmaPoints make_sigma_points(const GaussianEstimate& input, const UtParams& params);

/// Propagated mean and variance plus the input/output cross-covariance.
struct UnscentedMoments {
  double mean = 0.0;
  double variance = 0.0;
  double cross_covariance = 0.0;
};

UnscentedMoments unscented_moments(const GaussianEstimate& input,
                                   const std::function<double(double)>& f,
                                   const UtParams& params);

/// Gaussian pushed through `f` with three sigma points; variance floored.
GaussianEstimate unscented_transform(const GaussianEstimate& input,
                                     const std::function<double(double)>& f,
                                     const UtParams& params = {});

/// Scalar state transition between consecutive grid points.
class Dynamics {
 public:
  virtual ~Dynamics() = default;

  /// Maps state `x` at index `to - 1` to index `to`. `reference` holds the
  /// current estimate of the path; only entries before `to` are read.
  virtual double propagate(std::size_t to, double x, std::span<const double> reference) const = 0;
};

/// x_to = slope[to-1] x + intercept[to-1].
class AffineDynamics final : public Dynamics {
 public:
  AffineDynamics(std::vector<double> slopes, std::vector<double> intercepts);
  double propagate(std::size_t to, double x, std::span<const double> reference) const override;

 private:
  std::vector<double> slopes_;
  std::vector<double> intercepts_;
};

/// Right-endpoint ODE flow: rates are fitted through the reference path at
/// `to - 2` and `to - 1`, then the state is flowed to `to` with those rates.
/// ConstantRegulation averages the flow over the k_deg scan under the scan
/// prior. The first step carries the state over unchanged.
class WindowFlowDynamics final : public Dynamics {
 public:
  WindowFlowDynamics(models::ModelKind kind, TimeGrid grid, models::ScanConfig scan = {});
  double propagate(std::size_t to, double x, std::span<const double> reference) const override;

 private:
  models::ModelKind kind_;
  TimeGrid grid_;
  models::ScanConfig scan_;
};

/// Data weight of the two-way update: (V(M)+q) / (V(M)+q+V(Z)).
double kf_gain(double v_model_plus_q, double v_data);

/// Adaptive non-linear KF: no feedback of the filter path, constant q, model
/// predictions from right-endpoint spline fits through the two previous
/// filter estimates, data variance recomputed from the replicates.
Trajectory run_adaptive_kf(const TimeSeriesData& data, models::ModelKind kind, double q);

Trajectory run_ukf(const TimeSeriesData& data, const Dynamics& dynamics, double q,
                   const UtParams& ut = {});
Trajectory run_ukf(const TimeSeriesData& data, models::ModelKind kind, double q,
                   const UtParams& ut = {});

/// Forward unscented KF followed by a backward Rauch-Tung-Striebel pass.
Trajectory run_urts(const TimeSeriesData& data, const Dynamics& dynamics, double q,
                    const UtParams& ut = {});
Trajectory run_urts(const TimeSeriesData& data, models::ModelKind kind, double q,
                    const UtParams& ut = {});

/// Iterated posterior linearization smoother. The first iteration is the
/// unscented RTS smoother; later ones replace the dynamics with sigma-point
/// linear regressions around the current smoothed posterior.
Trajectory run_ipls(const TimeSeriesData& data, const Dynamics& dynamics, double q,
                    std::size_t iterations, const UtParams& ut = {});
Trajectory run_ipls(const TimeSeriesData& data, models::ModelKind kind, double q,
                    std::size_t iterations, const UtParams& ut = {});

Trajectory run_baseline(const BaselineConfig& config, const TimeSeriesData& data,
                        models::ModelKind kind);

}  // namespace pathkf::baselines
