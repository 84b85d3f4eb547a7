#include "pathkf/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace pathkf::models {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::BirthDeath: return "birth-death";
    case ModelKind::ConstantRegulation: return "const-reg";
  }
  return "unknown";
}

std::string_view to_string(FitPosition pos) {
  switch (pos) {
    case FitPosition::Center: return "center";
    case FitPosition::RightEndpoint: return "right";
    case FitPosition::LeftEndpoint: return "left";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "birth-death" || text == "BirthDeath") return ModelKind::BirthDeath;
  if (text == "const-reg" || text == "ConstantRegulation") return ModelKind::ConstantRegulation;
  throw InvalidConfig("unknown model kind '" + std::string(text) + "'");
}

void validate_window(const Window& w, FitPosition pos) {
  const bool finite = std::isfinite(w.a.time) && std::isfinite(w.b.time) &&
                      std::isfinite(w.target_time) && std::isfinite(w.a.value) &&
                      std::isfinite(w.b.value);
  if (!finite) throw InvalidData("window contains non-finite values");
  if (!(w.a.time < w.b.time)) throw InvalidData("window anchors must be strictly ordered");

  bool ordered = false;
  switch (pos) {
    case FitPosition::Center:
      ordered = w.a.time < w.target_time && w.target_time < w.b.time;
      break;
    case FitPosition::RightEndpoint:
      ordered = w.b.time < w.target_time;
      break;
    case FitPosition::LeftEndpoint:
      ordered = w.target_time < w.a.time;
      break;
  }
  if (!ordered) {
    throw InvalidData("window target time is inconsistent with fit position '" +
                      std::string(to_string(pos)) + "'");
  }
}

std::vector<double> scan_grid(const Window& w, const ScanConfig& scan) {
  if (scan.points == 0 || !(scan.k_min > 0.0) || !(scan.span_multiple > 0.0)) {
    throw InvalidParameter("scan configuration needs points > 0, k_min > 0, span_multiple > 0");
  }
  const double lo_t = std::min(w.a.time, w.target_time);
  const double hi_t = std::max(w.b.time, w.target_time);
  double k_max = scan.span_multiple / (hi_t - lo_t);
  if (!(k_max > scan.k_min)) k_max = 10.0 * scan.k_min;

  std::vector<double> grid(scan.points);
  if (scan.points == 1) {
    grid[0] = scan.k_min;
    return grid;
  }
  const double log_lo = std::log(scan.k_min);
  const double log_step = (std::log(k_max) - log_lo) / static_cast<double>(scan.points - 1);
  for (std::size_t j = 0; j < scan.points; ++j) {
    grid[j] = std::exp(log_lo + log_step * static_cast<double>(j));
  }
  grid.front() = scan.k_min;
  grid.back() = k_max;
  return grid;
}

double flow_birth_death(double n0, double k_birth, double k_death, double dt) {
  if (!std::isfinite(n0) || !std::isfinite(k_birth) || !std::isfinite(k_death) ||
      !std::isfinite(dt)) {
    throw InvalidParameter("birth-death flow requires finite inputs");
  }
  if (!(n0 > 0.0)) throw InvalidParameter("birth-death flow requires n0 > 0");
  const double n = n0 * std::exp((k_birth - k_death) * dt);
  if (!std::isfinite(n)) throw NumericalOverflow("birth-death flow overflowed");
  return n;
}

double flow_const_reg(double x0, double k_exp, double k_deg, double dt) {
  if (!(k_deg > 0.0)) throw InvalidParameter("constant-regulation flow requires k_deg > 0");
  if (!std::isfinite(x0) || !std::isfinite(k_exp) || !std::isfinite(dt) ||
      !std::isfinite(k_deg)) {
    throw InvalidParameter("constant-regulation flow requires finite inputs");
  }
  // x0 + (c - x0)(1 - e^{-k dt}) is the same solution with less cancellation.
  const double steady = k_exp / k_deg;
  const double x = x0 + (steady - x0) * -std::expm1(-k_deg * dt);
  if (!std::isfinite(x)) throw NumericalOverflow("constant-regulation flow overflowed");
  return x;
}

double solve_k_birth(double k_death, const Window& w, FitPosition pos) {
  validate_window(w, pos);
  if (!(w.a.value > 0.0) || !(w.b.value > 0.0)) {
    throw InvalidData("birth-death fit needs positive anchor values");
  }
  return k_death + std::log(w.b.value / w.a.value) / (w.b.time - w.a.time);
}

double solve_k_exp(double k_deg, const Window& w, FitPosition pos) {
  validate_window(w, pos);
  if (!(k_deg > 0.0) || !std::isfinite(k_deg)) {
    throw InvalidParameter("constant-regulation fit requires finite k_deg > 0");
  }
  const double relax = -std::expm1(-k_deg * (w.b.time - w.a.time));
  if (!(relax > 0.0)) throw InvalidParameter("k_deg too small: relaxation factor underflows");
  // k_deg (x_b - x_a e^{-k dt}) / (1 - e^{-k dt}), rearranged.
  const double k_exp = k_deg * w.a.value + k_deg * (w.b.value - w.a.value) / relax;
  if (!std::isfinite(k_exp)) throw InvalidParameter("k_deg too small: expression rate overflows");
  return k_exp;
}

double spline_value(ModelKind kind, const Window& w, double k1, double k2, double t) {
  const double dt = t - w.a.time;
  switch (kind) {
    case ModelKind::BirthDeath:
      return w.a.value * std::exp((k2 - k1) * dt);
    case ModelKind::ConstantRegulation:
      return w.a.value + (k2 / k1 - w.a.value) * -std::expm1(-k1 * dt);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

// Trapezoid weights of a prior uniform in log k1 over the scan range.
std::vector<double> prior_weights(std::size_t n) {
  if (n == 1) return {1.0};
  const double inner = 1.0 / static_cast<double>(n - 1);
  std::vector<double> w(n, inner);
  w.front() = w.back() = 0.5 * inner;
  return w;
}

}  // namespace

SplinePosterior scan_splines(const Window& window, ModelKind kind, FitPosition pos,
                             const ScanConfig& scan) {
  validate_window(window, pos);
  SplinePosterior post;
  post.k1_grid = scan_grid(window, scan);
  const std::size_t n = post.k1_grid.size();
  post.k2_values.resize(n);
  post.predictions.resize(n);
  post.weights = prior_weights(n);

  for (std::size_t j = 0; j < n; ++j) {
    const double k1 = post.k1_grid[j];
    const double k2 = kind == ModelKind::BirthDeath ? solve_k_birth(k1, window, pos)
                                                    : solve_k_exp(k1, window, pos);
    post.k2_values[j] = k2;
    post.predictions[j] = spline_value(kind, window, k1, k2, window.target_time);
  }
  return post;
}

SplinePosterior fit_spline_posterior(const Window& window, ModelKind kind, FitPosition pos,
                                     const ScanConfig& scan) {
  SplinePosterior post = scan_splines(window, kind, pos, scan);
  const std::size_t n = post.predictions.size();
  const double scale = 2.0 * std::max(window.target.variance, kVarianceFloor);

  // Log-weights are shifted by their maximum before exponentiation; the
  // shift cancels in the normalization.
  std::vector<double> log_w(n, -std::numeric_limits<double>::infinity());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double p = post.predictions[j];
    if (!std::isfinite(p)) continue;
    const double r = p - window.target.mean;
    log_w[j] = -(r * r) / scale;
    best = std::max(best, log_w[j]);
  }
  if (!std::isfinite(best)) {
    throw DegeneratePosterior("no spline in the scan produced a finite weight");
  }

  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    post.weights[j] = std::isfinite(log_w[j]) ? post.weights[j] * std::exp(log_w[j] - best) : 0.0;
    total += post.weights[j];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DegeneratePosterior("spline posterior weights do not normalize");
  }
  for (double& wj : post.weights) wj /= total;
  return post;
}

ModelPrediction posterior_moments(const SplinePosterior& post) {
  const std::size_t n = post.weights.size();
  if (n == 0 || post.predictions.size() != n) {
    throw InvalidData("spline posterior is empty or inconsistent");
  }
  double mean = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (post.weights[j] > 0.0) mean += post.weights[j] * post.predictions[j];
  }
  double var = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (post.weights[j] > 0.0) {
      const double r = post.predictions[j] - mean;
      var += post.weights[j] * r * r;
    }
  }
  if (!std::isfinite(mean) || !std::isfinite(var)) {
    throw NumericalOverflow("spline posterior moments are not finite");
  }
  return {make_estimate(mean, var)};
}

Window make_window(ModelKind kind, const TimeGrid& grid, std::size_t ia, double va,
                   std::size_t ib, double vb, std::size_t it, GaussianEstimate target) {
  if (kind == ModelKind::BirthDeath) {
    va = std::max(va, kPositiveClamp);
    vb = std::max(vb, kPositiveClamp);
  }
  return Window{{grid[ia], va}, {grid[ib], vb}, grid[it], target};
}

FitPosition fit_position_for(std::size_t t, std::size_t n) {
  if (t == 0) return FitPosition::LeftEndpoint;
  if (t + 1 == n) return FitPosition::RightEndpoint;
  return FitPosition::Center;
}

ModelPrediction SplineModel::predict(const Trajectory& path, std::size_t t) const {
  const std::size_t n = path.size();
  const auto pos = fit_position_for(t, n);
  std::size_t ia = 0;
  std::size_t ib = 0;
  switch (pos) {
    case FitPosition::LeftEndpoint: ia = 1; ib = 2; break;
    case FitPosition::RightEndpoint: ia = n - 3; ib = n - 2; break;
    case FitPosition::Center: ia = t - 1; ib = t + 1; break;
  }
  const Window w =
      make_window(kind_, path.grid(), ia, path[ia].mean, ib, path[ib].mean, t, path[t]);
  return posterior_moments(fit_spline_posterior(w, kind_, pos, scan_));
}

AffineMapModel::AffineMapModel(std::vector<double> slopes, std::vector<double> intercepts)
    : slopes_(std::move(slopes)), intercepts_(std::move(intercepts)) {
  if (slopes_.empty() || slopes_.size() != intercepts_.size()) {
    throw InvalidParameter("affine model needs matching, non-empty slope/intercept sequences");
  }
  if (slopes_[0] == 0.0) throw InvalidParameter("affine model's first slope must be invertible");
}

ModelPrediction AffineMapModel::predict(const Trajectory& path, std::size_t t) const {
  if (path.size() != slopes_.size() + 1) {
    throw InvalidData("affine model has " + std::to_string(slopes_.size()) +
                      " steps but the path has " + std::to_string(path.size()) + " points");
  }
  const double value = t == 0 ? (path[1].mean - intercepts_[0]) / slopes_[0]
                              : slopes_[t - 1] * path[t - 1].mean + intercepts_[t - 1];
  return {make_estimate(value, kVarianceFloor)};
}

}  // namespace pathkf::models
