#include "pathkf/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "pathkf/parallel.hpp"

namespace pathkf::bench {

std::vector<double> squared_errors(const Trajectory& filter, const GroundTruth& truth) {
  if (!(filter.grid() == truth.grid())) {
    throw InvalidData("filter and ground truth grids differ");
  }
  std::vector<double> out(filter.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    const double e = filter[t].mean - truth[t];
    out[t] = e * e;
  }
  return out;
}

double mse(const Trajectory& filter, const GroundTruth& truth) {
  const auto se = squared_errors(filter, truth);
  return std::accumulate(se.begin(), se.end(), 0.0) / static_cast<double>(se.size());
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::PKF: return "pkf";
    case Method::AdaptiveKF: return "kf";
    case Method::UnscentedKF: return "ukf";
    case Method::UnscentedRTS: return "urts";
    case Method::IPLS: return "ipls";
  }
  return "unknown";
}

namespace {

std::string format_number(double x) {
  if (x == std::floor(x) && std::abs(x) < 1e15) return std::to_string(static_cast<long long>(x));
  std::string s = std::to_string(x);
  s.erase(s.find_last_not_of('0') + 1);
  return s;
}

}  // namespace

std::string AlgorithmSpec::label() const {
  std::string out(to_string(method));
  if (method != Method::PKF) out += " q=" + format_number(q);
  if (method == Method::PKF || method == Method::IPLS) {
    out += " iterations=" + std::to_string(iterations);
  }
  return out;
}

std::vector<AlgorithmSpec> table2_specs() {
  std::vector<AlgorithmSpec> specs;
  for (Method m : {Method::AdaptiveKF, Method::UnscentedKF, Method::UnscentedRTS}) {
    for (double q : {1.0, 10.0}) specs.push_back({m, q, 1, {}});
  }
  for (double q : {1.0, 10.0}) {
    for (std::size_t it : {1u, 10u}) specs.push_back({Method::IPLS, q, it, {}});
  }
  specs.push_back({Method::PKF, 0.0, 1, {}});
  specs.push_back({Method::PKF, 0.0, 10, {}});
  return specs;
}

Trajectory run_spec(const AlgorithmSpec& spec, const TimeSeriesData& data, models::ModelKind kind) {
  using baselines::Algorithm;
  switch (spec.method) {
    case Method::PKF: {
      pkf::PkfOptions opts;
      opts.iterations = spec.iterations;
      return pkf::run_pkf(data, kind, opts).final.filter;
    }
    case Method::AdaptiveKF:
      return baselines::run_baseline({Algorithm::AdaptiveKF, spec.q, 1, spec.ut}, data, kind);
    case Method::UnscentedKF:
      return baselines::run_baseline({Algorithm::UnscentedKF, spec.q, 1, spec.ut}, data, kind);
    case Method::UnscentedRTS:
      return baselines::run_baseline({Algorithm::UnscentedRTS, spec.q, 1, spec.ut}, data, kind);
    case Method::IPLS:
      return baselines::run_baseline({Algorithm::IPLS, spec.q, spec.iterations, spec.ut}, data,
                                     kind);
  }
  throw InvalidParameter("unknown benchmark method");
}

BenchmarkReport run_benchmark(const synth::SimulatedSeries& series,
                              const std::vector<AlgorithmSpec>& specs, models::ModelKind kind,
                              std::size_t jobs) {
  if (specs.empty()) throw InvalidParameter("benchmark needs at least one algorithm spec");
  BenchmarkReport report;
  report.scenario = series.label;
  report.truth = series.truth;
  report.rows.resize(specs.size());

  parallel_for(specs.size(), jobs, [&](std::size_t i) {
    BenchmarkRow& row = report.rows[i];
    row.spec = specs[i];
    try {
      Trajectory traj = run_spec(specs[i], series.data, kind);
      row.squared_error = squared_errors(traj, series.truth);
      row.mse = std::accumulate(row.squared_error.begin(), row.squared_error.end(), 0.0) /
                static_cast<double>(row.squared_error.size());
      row.trajectory = std::move(traj);
    } catch (const std::exception& e) {
      row.error = e.what();
      row.mse = std::numeric_limits<double>::quiet_NaN();
      if (row.error.empty()) row.error = "unknown failure";
    }
  });
  return report;
}

BenchmarkReport run_benchmark(const synth::BirthDeathScenario& scenario,
                              const std::vector<AlgorithmSpec>& specs, std::size_t jobs) {
  BenchmarkReport report = run_benchmark(synth::simulate_birth_death(scenario), specs,
                                         models::ModelKind::BirthDeath, jobs);
  report.seed = scenario.seed;
  return report;
}

double mean_log_ratio(const std::vector<double>& q, const std::vector<GaussianEstimate>& data) {
  if (q.size() != data.size() || q.empty()) {
    throw InvalidData("process uncertainty and data lengths differ");
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < q.size(); ++t) {
    sum += std::log(std::max(q[t], kVarianceFloor) / std::max(data[t].variance, kVarianceFloor));
  }
  return sum / static_cast<double>(q.size());
}

QRatioSummary q_ratio_summary(const std::vector<LabeledRun>& runs) {
  if (runs.empty()) throw InvalidParameter("q ratio summary needs at least one series");
  QRatioSummary out;
  out.series.reserve(runs.size());
  for (const LabeledRun& run : runs) {
    const auto observed = run.data.summarize();
    double v_sum = 0.0;
    for (const auto& e : observed) v_sum += e.variance;
    out.series.push_back({run.data.series_id(), run.label,
                          mean_log_ratio(run.result.final.process_uncertainty, observed),
                          v_sum / static_cast<double>(observed.size()), 0});
  }

  const std::size_t n = out.series.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.series[a].mean_data_variance < out.series[b].mean_data_variance;
  });
  for (std::size_t rank = 0; rank < n; ++rank) {
    out.series[order[rank]].variance_decile = std::min<std::size_t>(9, rank * 10 / n);
  }

  for (const SeriesRatio& s : out.series) {
    auto it = std::find_if(out.by_label.begin(), out.by_label.end(),
                           [&](const GroupRatio& g) { return g.key == s.label; });
    if (it == out.by_label.end()) {
      out.by_label.push_back({s.label, 0, 0.0});
      it = std::prev(out.by_label.end());
    }
    ++it->count;
    it->mean_log_ratio += s.mean_log_ratio;
  }
  for (GroupRatio& g : out.by_label) g.mean_log_ratio /= static_cast<double>(g.count);

  std::vector<GroupRatio> deciles(10);
  for (std::size_t d = 0; d < 10; ++d) deciles[d].key = "decile-" + std::to_string(d + 1);
  for (const SeriesRatio& s : out.series) {
    ++deciles[s.variance_decile].count;
    deciles[s.variance_decile].mean_log_ratio += s.mean_log_ratio;
  }
  for (GroupRatio& g : deciles) {
    if (g.count == 0) continue;
    g.mean_log_ratio /= static_cast<double>(g.count);
    out.by_variance_decile.push_back(std::move(g));
  }
  return out;
}

}  // namespace pathkf::bench
