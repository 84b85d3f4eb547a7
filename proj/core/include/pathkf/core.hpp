#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pathkf/error.hpp"

namespace pathkf {

/// Lower bound applied to every variance, in the data's squared units.
/// Keeps the weight formulas well defined when replicates coincide.
inline constexpr double kVarianceFloor = 1e-9;

/// Strictly increasing, finite timestamps; at least three of them so that
/// every point has a three-point window.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times);

  /// `count` points starting at `start`, spaced `step` apart.
  static TimeGrid uniform(double start, double step, std::size_t count);

  std::size_t size() const noexcept { return times_.size(); }
  double operator[](std::size_t i) const { return times_[i]; }
  double front() const { return times_.front(); }
  double back() const { return times_.back(); }
  std::span<const double> times() const noexcept { return times_; }

  /// Index of the grid point closest to `t` (ties resolve to the earlier point).
  std::size_t nearest_index(double t) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  std::vector<double> times_;
};

struct GaussianEstimate {
  double mean = 0.0;
  double variance = kVarianceFloor;

  friend bool operator==(const GaussianEstimate&, const GaussianEstimate&) = default;
};

/// Builds an estimate, clamping the variance at kVarianceFloor.
/// Throws InvalidData on non-finite input or negative variance.
GaussianEstimate make_estimate(double mean, double variance);

/// Replicated noisy measurements of one unit of analysis on a shared grid.
class TimeSeriesData {
 public:
  TimeSeriesData(std::string series_id, TimeGrid grid,
                 std::vector<std::vector<double>> samples);

  const std::string& series_id() const noexcept { return series_id_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }
  const std::vector<std::vector<double>>& samples() const noexcept { return samples_; }
  std::span<const double> samples_at(std::size_t i) const { return samples_[i]; }

  /// Per-timepoint Gaussian summary of the replicates (see summarize_samples).
  std::vector<GaussianEstimate> summarize() const;

 private:
  std::string series_id_;
  TimeGrid grid_;
  std::vector<std::vector<double>> samples_;
};

/// A path of Gaussian estimates over a grid.
class Trajectory {
 public:
  Trajectory(TimeGrid grid, std::vector<GaussianEstimate> estimates);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }
  const GaussianEstimate& operator[](std::size_t i) const { return estimates_[i]; }
  const std::vector<GaussianEstimate>& estimates() const noexcept { return estimates_; }
  std::vector<double> means() const;
  std::vector<double> variances() const;

 private:
  TimeGrid grid_;
  std::vector<GaussianEstimate> estimates_;
};

class GroundTruth {
 public:
  GroundTruth(TimeGrid grid, std::vector<double> values);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  TimeGrid grid_;
  std::vector<double> values_;
};

/// Mean and Bessel-corrected variance of replicate measurements. A single
/// replicate, or zero spread, yields kVarianceFloor.
GaussianEstimate summarize_samples(std::span<const double> samples);

}  // namespace pathkf
