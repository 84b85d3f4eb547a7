#include "pathkf/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace pathkf {

namespace {

bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 3) {
    throw InvalidData("time grid needs at least 3 points, got " +
                      std::to_string(times_.size()));
  }
  if (!all_finite(times_)) throw InvalidData("time grid contains non-finite values");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw InvalidData("time grid is not strictly increasing at index " +
                        std::to_string(i));
    }
  }
}

TimeGrid TimeGrid::uniform(double start, double step, std::size_t count) {
  std::vector<double> times(count);
  for (std::size_t i = 0; i < count; ++i) times[i] = start + step * static_cast<double>(i);
  return TimeGrid(std::move(times));
}

std::size_t TimeGrid::nearest_index(double t) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return 0;
  if (it == times_.end()) return times_.size() - 1;
  const auto hi = static_cast<std::size_t>(it - times_.begin());
  return (t - times_[hi - 1] <= times_[hi] - t) ? hi - 1 : hi;
}

GaussianEstimate make_estimate(double mean, double variance) {
  if (!std::isfinite(mean) || !std::isfinite(variance)) {
    throw InvalidData("Gaussian estimate must be finite");
  }
  if (variance < 0.0) throw InvalidData("Gaussian estimate has negative variance");
  return {mean, std::max(variance, kVarianceFloor)};
}

TimeSeriesData::TimeSeriesData(std::string series_id, TimeGrid grid,
                               std::vector<std::vector<double>> samples)
    : series_id_(std::move(series_id)), grid_(std::move(grid)), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size()) {
    throw InvalidData("series '" + series_id_ + "': " + std::to_string(samples_.size()) +
                      " sample sets for " + std::to_string(grid_.size()) + " timepoints");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].empty()) {
      throw InvalidData("series '" + series_id_ + "': no replicates at index " +
                        std::to_string(i));
    }
    if (!all_finite(samples_[i])) {
      throw InvalidData("series '" + series_id_ + "': non-finite sample at index " +
                        std::to_string(i));
    }
  }
}

std::vector<GaussianEstimate> TimeSeriesData::summarize() const {
  std::vector<GaussianEstimate> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(summarize_samples(s));
  return out;
}

Trajectory::Trajectory(TimeGrid grid, std::vector<GaussianEstimate> estimates)
    : grid_(std::move(grid)), estimates_(std::move(estimates)) {
  if (estimates_.size() != grid_.size()) {
    throw InvalidData("trajectory length does not match its grid");
  }
  for (const auto& e : estimates_) {
    if (!std::isfinite(e.mean) || !std::isfinite(e.variance) || e.variance < kVarianceFloor) {
      throw InvalidData("trajectory estimate violates finiteness or variance floor");
    }
  }
}

std::vector<double> Trajectory::means() const {
  std::vector<double> out(estimates_.size());
  std::transform(estimates_.begin(), estimates_.end(), out.begin(),
                 [](const GaussianEstimate& e) { return e.mean; });
  return out;
}

std::vector<double> Trajectory::variances() const {
  std::vector<double> out(estimates_.size());
  std::transform(estimates_.begin(), estimates_.end(), out.begin(),
                 [](const GaussianEstimate& e) { return e.variance; });
  return out;
}

GroundTruth::GroundTruth(TimeGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidData("ground truth length does not match its grid");
  }
  if (!all_finite(values_)) throw InvalidData("ground truth contains non-finite values");
}

GaussianEstimate summarize_samples(std::span<const double> samples) {
  if (samples.empty()) throw InvalidData("cannot summarize an empty replicate set");
  if (!all_finite(samples)) throw InvalidData("replicate set contains non-finite values");

  // Summing in sorted order makes the result bit-identical under permutation.
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  const auto n = static_cast<double>(sorted.size());
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  if (sorted.size() < 2) return {mean, kVarianceFloor};

  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  return {mean, std::max(ss / (n - 1.0), kVarianceFloor)};
}

}  // namespace pathkf
