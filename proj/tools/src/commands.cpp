#include "pathkf_cli/commands.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "pathkf/bench.hpp"
#include "pathkf/synth.hpp"
#include "pathkf_cli/batch.hpp"
#include "pathkf_cli/io.hpp"

namespace pathkf::cli {

namespace {

using models::ModelKind;

std::string sibling_path(const std::string& output, const std::string& suffix) {
  if (output == "-") return {};
  std::filesystem::path p(output);
  const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
  return (p.parent_path() / (p.stem().string() + suffix + ext)).string();
}

synth::BirthDeathScenario scenario_for(const RunConfig& config) {
  synth::BirthDeathScenario s = config.scenario;
  s.seed = config.seed;
  return s;
}

synth::GenePanelScenario panel_for(const RunConfig& config) {
  synth::GenePanelScenario p = config.panel;
  p.seed = config.seed;
  return p;
}

SeriesTable load_input(const RunConfig& config) {
  SeriesTable table = read_series_csv(config.input);
  if (!table.skipped.empty()) {
    std::cerr << fmt::format("warning: skipped {} series with fewer than 3 timepoints\n",
                             table.skipped.size());
  }
  if (table.series.empty()) throw InvalidConfig("input contains no series with >= 3 timepoints");
  return table;
}

void report_failures(const BatchResult& result) {
  for (const auto& o : result.outcomes) {
    if (!o.ok()) std::cerr << fmt::format("error: series '{}': {}\n", o.series_id, o.error);
  }
}

nlohmann::ordered_json header(const RunConfig& config, ModelKind model) {
  nlohmann::ordered_json j;
  j["algorithm"] = config.spec().label();
  j["model"] = std::string(models::to_string(model));
  return j;
}

}  // namespace

int cmd_simulate(const RunConfig& config, const std::string& truth_path,
                 const std::string& labels_path) {
  const ModelKind model = config.model.value_or(ModelKind::BirthDeath);
  std::vector<synth::SimulatedSeries> sims;
  if (model == ModelKind::BirthDeath) {
    sims.push_back(synth::simulate_birth_death(scenario_for(config)));
  } else {
    sims = synth::simulate_gene_panel(panel_for(config));
  }

  std::vector<TimeSeriesData> data;
  std::vector<std::pair<std::string, GroundTruth>> truths;
  std::vector<std::pair<std::string, std::string>> labels;
  for (const auto& s : sims) {
    data.push_back(s.data);
    truths.emplace_back(s.data.series_id(), s.truth);
    labels.emplace_back(s.data.series_id(), s.label);
  }
  std::ostringstream csv;
  write_series_csv(csv, data);
  write_text(config.output, csv.str());

  const std::string truth = truth_path.empty() ? sibling_path(config.output, "_truth") : truth_path;
  if (!truth.empty()) write_truth_csv(truth, truths);
  if (model == ModelKind::ConstantRegulation) {
    const std::string lp = labels_path.empty() ? sibling_path(config.output, "_labels") : labels_path;
    if (!lp.empty()) write_labels_csv(lp, labels);
  }
  return kSuccess;
}

int cmd_run(const RunConfig& config) {
  if (config.input.empty()) throw InvalidConfig("run needs --input");
  const ModelKind model = config.model.value_or(ModelKind::BirthDeath);
  const SeriesTable table = load_input(config);
  const BatchResult result = batch_run(config, model, table.series);
  report_failures(result);

  nlohmann::ordered_json j = header(config, model);
  const auto body = to_json(result, table.skipped);
  for (const auto& [key, value] : body.items()) j[key] = value;
  write_text(config.output, j.dump(2) + "\n");
  return result.failures > 0 ? kPartialFailure : kSuccess;
}

int cmd_bench(const RunConfig& config, const std::string& traces_path) {
  const auto scenario = scenario_for(config);
  const bench::BenchmarkReport report =
      bench::run_benchmark(scenario, bench::table2_specs(), config.jobs);
  write_result(report, config.output);

  std::size_t failures = 0;
  for (const auto& row : report.rows) {
    if (!row.ok()) {
      ++failures;
      std::cerr << fmt::format("error: {}: {}\n", row.spec.label(), row.error);
    }
  }
  if (!traces_path.empty()) {
    nlohmann::ordered_json j;
    j["scenario"] = report.scenario;
    j["seed"] = report.seed;
    j["time"] = report.truth->grid().times();
    j["truth"] = report.truth->values();
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
      nlohmann::ordered_json r;
      r["algorithm"] = row.spec.label();
      if (row.ok()) {
        r["mse"] = row.mse;
        r["mean"] = row.trajectory->means();
        r["variance"] = row.trajectory->variances();
        r["squared_error"] = row.squared_error;
      } else {
        r["error"] = row.error;
      }
      rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    write_text(traces_path, j.dump(2) + "\n");
  }
  return failures > 0 ? kPartialFailure : kSuccess;
}

int cmd_batch(const RunConfig& config, const std::string& labels_path) {
  const ModelKind model = config.model.value_or(ModelKind::ConstantRegulation);
  std::vector<TimeSeriesData> series;
  std::vector<std::string> skipped;
  std::map<std::string, std::string> labels;

  if (config.input.empty()) {
    for (auto& s : synth::simulate_gene_panel(panel_for(config))) {
      labels[s.data.series_id()] = s.label;
      series.push_back(std::move(s.data));
    }
  } else {
    SeriesTable table = load_input(config);
    series = std::move(table.series);
    skipped = std::move(table.skipped);
    if (!labels_path.empty()) {
      for (auto& [id, label] : read_labels_csv(labels_path)) labels[id] = label;
    }
  }

  const BatchResult result = batch_run(config, model, series);
  report_failures(result);

  nlohmann::ordered_json j = header(config, model);
  const auto body = to_json(result, skipped);
  for (const auto& [key, value] : body.items()) j[key] = value;

  if (config.algorithm == bench::Method::PKF) {
    std::vector<bench::LabeledRun> runs;
    for (std::size_t i = 0; i < series.size(); ++i) {
      const auto& o = result.outcomes[i];
      if (!o.ok()) continue;
      const auto it = labels.find(o.series_id);
      runs.push_back({it == labels.end() ? "unlabeled" : it->second, *o.pkf, series[i]});
    }
    if (!runs.empty()) j["q_ratio_summary"] = to_json(bench::q_ratio_summary(runs));
  }
  write_text(config.output, j.dump(2) + "\n");
  return result.failures > 0 ? kPartialFailure : kSuccess;
}

int cmd_convergence(const RunConfig& config) {
  const ModelKind model = config.model.value_or(ModelKind::BirthDeath);
  std::vector<TimeSeriesData> series;
  std::vector<std::string> skipped;
  if (config.input.empty()) {
    series.push_back(synth::simulate_birth_death(scenario_for(config)).data);
  } else {
    SeriesTable table = load_input(config);
    series = std::move(table.series);
    skipped = std::move(table.skipped);
  }

  RunConfig pkf_config = config;
  pkf_config.algorithm = bench::Method::PKF;
  pkf_config.retain_history = true;
  const BatchResult result = batch_run(pkf_config, model, series);
  report_failures(result);

  nlohmann::ordered_json j;
  j["model"] = std::string(models::to_string(model));
  j["iterations"] = config.iterations;
  auto out = nlohmann::ordered_json::array();
  auto failures = nlohmann::ordered_json::array();
  for (const auto& o : result.outcomes) {
    if (!o.ok()) {
      failures.push_back({{"series_id", o.series_id}, {"error", o.error}});
      continue;
    }
    const auto& conv = o.pkf->convergence;
    std::vector<double> relative(conv.max_abs_dq.size());
    for (std::size_t i = 0; i < relative.size(); ++i) {
      const auto& q = o.pkf->history[i].process_uncertainty;
      relative[i] = conv.max_abs_dq[i] / (*std::max_element(q.begin(), q.end()) + kVarianceFloor);
    }
    nlohmann::ordered_json entry;
    entry["series_id"] = o.series_id;
    entry["max_abs_dq"] = conv.max_abs_dq;
    entry["relative_dq"] = relative;
    entry["max_filter_variance"] = conv.max_filter_variance;
    auto history = nlohmann::ordered_json::array();
    for (const auto& state : o.pkf->history) history.push_back(to_json(state));
    entry["history"] = std::move(history);
    out.push_back(std::move(entry));
  }
  j["series"] = std::move(out);
  j["failures"] = std::move(failures);
  j["skipped"] = skipped;
  write_text(config.output, j.dump(2) + "\n");
  return result.failures > 0 ? kPartialFailure : kSuccess;
}

}  // namespace pathkf::cli
