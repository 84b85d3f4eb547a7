#include "pathkf_cli/batch.hpp"

#include "pathkf/bench.hpp"
#include "pathkf/parallel.hpp"
#include "pathkf_cli/io.hpp"

namespace pathkf::cli {

BatchResult batch_run(const RunConfig& config, models::ModelKind model,
                      const std::vector<TimeSeriesData>& series) {
  if (series.empty()) throw InvalidConfig("batch needs at least one series");
  BatchResult result;
  result.outcomes.resize(series.size());
  const bench::AlgorithmSpec spec = config.spec();

  parallel_for(series.size(), config.jobs, [&](std::size_t i) {
    SeriesOutcome& out = result.outcomes[i];
    out.series_id = series[i].series_id();
    try {
      if (spec.method == bench::Method::PKF) {
        pkf::PkfOptions opts;
        opts.iterations = config.iterations;
        opts.retain_history = config.retain_history;
        out.pkf = pkf::run_pkf(series[i], model, opts);
      } else {
        out.trajectory = bench::run_spec(spec, series[i], model);
      }
    } catch (const std::exception& e) {
      out.error = e.what();
      if (out.error.empty()) out.error = "unknown failure";
    }
  });
  for (const auto& o : result.outcomes) result.failures += o.ok() ? 0 : 1;
  return result;
}

nlohmann::ordered_json to_json(const BatchResult& result, const std::vector<std::string>& skipped) {
  nlohmann::ordered_json j;
  auto series = nlohmann::ordered_json::array();
  auto failures = nlohmann::ordered_json::array();
  for (const auto& o : result.outcomes) {
    if (!o.ok()) {
      failures.push_back({{"series_id", o.series_id}, {"error", o.error}});
      continue;
    }
    nlohmann::ordered_json entry;
    entry["series_id"] = o.series_id;
    const auto body = o.pkf ? to_json(*o.pkf) : to_json(*o.trajectory);
    for (const auto& [key, value] : body.items()) entry[key] = value;
    series.push_back(std::move(entry));
  }
  j["series"] = std::move(series);
  j["failures"] = std::move(failures);
  j["skipped"] = skipped;
  return j;
}

}  // namespace pathkf::cli
