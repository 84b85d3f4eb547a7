#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "pathkf/core.hpp"

namespace pathkf::models {

/// Two-parameter ODEs with closed-form flows.
///   BirthDeath:          dN/dt = (k_birth - k_death) N
///   ConstantRegulation:  dX/dt = k_exp - k_deg X
enum class ModelKind { BirthDeath, ConstantRegulation };

/// Where the predicted point sits relative to the two anchors.
///   Center:        a < target < b
///   RightEndpoint: a < b < target
///   LeftEndpoint:  target < a < b
enum class FitPosition { Center, RightEndpoint, LeftEndpoint };

std::string_view to_string(ModelKind kind);
std::string_view to_string(FitPosition pos);
/// Accepts "birth-death" / "const-reg" (and the enumerator spellings).
ModelKind parse_model_kind(std::string_view text);

struct Anchor {
  double time = 0.0;
  double value = 0.0;
};

/// Three-point window: two anchors every spline passes through exactly, and
/// the point whose value the spline family predicts.
struct Window {
  Anchor a;
  Anchor b;
  double target_time = 0.0;
  GaussianEstimate target;
};

/// Throws InvalidData unless the window's times are ordered as `pos` requires.
void validate_window(const Window& window, FitPosition pos);

/// Configuration of the one-dimensional scan over the free rate
/// (k_death for BirthDeath, k_deg for ConstantRegulation).
/// The grid is log-spaced over [k_min, span_multiple / window span].
struct ScanConfig {
  std::size_t points = 200;
  double k_min = 1e-4;
  double span_multiple = 10.0;
};

std::vector<double> scan_grid(const Window& window, const ScanConfig& scan);

/// Discrete posterior over a one-parameter family of exact ODE solutions.
struct SplinePosterior {
  std::vector<double> k1_grid;
  std::vector<double> k2_values;
  std::vector<double> predictions;
  std::vector<double> weights;
};

struct ModelPrediction {
  GaussianEstimate estimate;
};

/// N(t0 + dt) = n0 exp((k_birth - k_death) dt).
double flow_birth_death(double n0, double k_birth, double k_death, double dt);

/// X(t0 + dt) = k_exp/k_deg + (x0 - k_exp/k_deg) exp(-k_deg dt).
/// Negative dt flows backward in time (used by left-endpoint fits).
double flow_const_reg(double x0, double k_exp, double k_deg, double dt);

/// Birth rate that makes the birth-death flow pass through both anchors.
double solve_k_birth(double k_death, const Window& window, FitPosition pos);

/// Expression rate that makes the constant-regulation flow pass through both anchors.
double solve_k_exp(double k_deg, const Window& window, FitPosition pos);

/// Value at `t` of the spline of `kind` with free rate `k1` and derived rate
/// `k2`, anchored at window.a.
double spline_value(ModelKind kind, const Window& window, double k1, double k2, double t);

/// Every spline of the scan weighted by the prior alone: uniform in log k1,
/// discretized with trapezoid weights (half weight at the two ends).
SplinePosterior scan_splines(const Window& window, ModelKind kind, FitPosition pos,
                             const ScanConfig& scan = {});

/// Weights each spline by exp(-L) with L the variance-scaled squared error
/// against the window target, times the scan_splines prior.
SplinePosterior fit_spline_posterior(const Window& window, ModelKind kind, FitPosition pos,
                                     const ScanConfig& scan = {});

ModelPrediction posterior_moments(const SplinePosterior& posterior);

/// Lower clamp applied to birth-death anchor values before taking log-ratios.
inline constexpr double kPositiveClamp = 1e-6;

/// Assembles a window from grid indices, clamping anchor values for
/// BirthDeath. The fit position is implied by the index order.
Window make_window(ModelKind kind, const TimeGrid& grid, std::size_t ia, double va,
                   std::size_t ib, double vb, std::size_t it, GaussianEstimate target);

/// Fit position used for point `t` of an `n`-point path: LeftEndpoint for the
/// first point, RightEndpoint for the last, Center elsewhere.
FitPosition fit_position_for(std::size_t t, std::size_t n);

/// Internal model of a pathspace filter: a Gaussian prediction for point `t`
/// given the whole previous path.
class InternalModel {
 public:
  virtual ~InternalModel() = default;
  virtual ModelPrediction predict(const Trajectory& path, std::size_t t) const = 0;
};

/// ODE-spline model over three-point windows of the path.
class SplineModel final : public InternalModel {
 public:
  explicit SplineModel(ModelKind kind, ScanConfig scan = {}) : kind_(kind), scan_(scan) {}

  ModelPrediction predict(const Trajectory& path, std::size_t t) const override;

  ModelKind kind() const noexcept { return kind_; }
  const ScanConfig& scan() const noexcept { return scan_; }

 private:
  ModelKind kind_;
  ScanConfig scan_;
};

/// Deterministic affine map X_t = slope[t-1] X_{t-1} + intercept[t-1], with
/// the first point predicted by inverting the first step. Variance is the floor.
class AffineMapModel final : public InternalModel {
 public:
  AffineMapModel(std::vector<double> slopes, std::vector<double> intercepts);

  ModelPrediction predict(const Trajectory& path, std::size_t t) const override;

 private:
  std::vector<double> slopes_;
  std::vector<double> intercepts_;
};

}  // namespace pathkf::models
