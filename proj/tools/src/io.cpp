#include "pathkf_cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include <fmt/format.h>

namespace pathkf::cli {

namespace {

constexpr std::string_view kSeriesHeader = "series_id,time,value";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t pos = line.find(sep); pos != std::string_view::npos; pos = line.find(sep, start)) {
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  out.push_back(trim(line.substr(start)));
  return out;
}

double parse_double(std::string_view field, std::size_t line, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line, fmt::format("{} '{}' is not a number", what, field));
  }
  if (!std::isfinite(value)) throw ParseError(line, fmt::format("{} '{}' is not finite", what, field));
  return value;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  out += '"';
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

template <typename Fn>
nlohmann::ordered_json array_of(std::size_t n, Fn&& fn) {
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) arr.push_back(fn(i));
  return arr;
}

void add_state_fields(nlohmann::ordered_json& j, const pkf::PkfState& s) {
  const std::size_t n = s.filter.size();
  j["iteration"] = s.iteration;
  j["time"] = array_of(n, [&](std::size_t t) { return s.filter.grid()[t]; });
  j["filter_mean"] = array_of(n, [&](std::size_t t) { return s.filter[t].mean; });
  j["filter_variance"] = array_of(n, [&](std::size_t t) { return s.filter[t].variance; });
  j["process_uncertainty"] = s.process_uncertainty;
  j["w_data"] = array_of(n, [&](std::size_t t) { return s.weights[t].w_data; });
  j["w_model"] = array_of(n, [&](std::size_t t) { return s.weights[t].w_model; });
  j["w_filter"] = array_of(n, [&](std::size_t t) { return s.weights[t].w_filter; });
}

}  // namespace

SeriesTable parse_series_csv(std::istream& in) {
  struct Pending {
    std::string id;
    std::map<double, std::vector<double>> by_time;
  };
  std::vector<Pending> pending;
  std::unordered_map<std::string, std::size_t> index;
  SeriesTable table;

  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    if (!header_seen) {
      if (text != kSeriesHeader) {
        throw ParseError(line, fmt::format("expected header '{}'", kSeriesHeader));
      }
      header_seen = true;
      continue;
    }
    const auto fields = split(text, ',');
    if (fields.size() != 3) {
      throw ParseError(line, fmt::format("expected 3 fields, found {}", fields.size()));
    }
    if (fields[0].empty()) throw ParseError(line, "empty series_id");
    const double t = parse_double(fields[1], line, "time");
    const double v = parse_double(fields[2], line, "value");

    auto [it, inserted] = index.try_emplace(std::string(fields[0]), pending.size());
    if (inserted) pending.push_back({it->first, {}});
    pending[it->second].by_time[t].push_back(v);
    ++table.rows;
  }
  if (!header_seen) throw ParseError(line == 0 ? 1 : line, "missing header");

  for (auto& p : pending) {
    if (p.by_time.size() < 3) {
      table.skipped.push_back(p.id);
      continue;
    }
    std::vector<double> times;
    std::vector<std::vector<double>> samples;
    times.reserve(p.by_time.size());
    samples.reserve(p.by_time.size());
    for (auto& [t, values] : p.by_time) {
      times.push_back(t);
      samples.push_back(std::move(values));
    }
    table.series.emplace_back(p.id, TimeGrid(std::move(times)), std::move(samples));
  }
  return table;
}

SeriesTable read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return parse_series_csv(in);
}

void write_series_csv(std::ostream& out, const std::vector<TimeSeriesData>& series) {
  out << kSeriesHeader << '\n';
  for (const auto& s : series) {
    for (std::size_t t = 0; t < s.size(); ++t) {
      for (double v : s.samples_at(t)) {
        out << fmt::format("{},{},{}\n", s.series_id(), s.grid()[t], v);
      }
    }
  }
}

void write_series_csv(const std::filesystem::path& path, const std::vector<TimeSeriesData>& series) {
  auto out = open_output(path);
  write_series_csv(out, series);
  finish(out, path);
}

void write_truth_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, GroundTruth>>& truths) {
  auto out = open_output(path);
  out << "series_id,time,true_value\n";
  for (const auto& [id, truth] : truths) {
    for (std::size_t t = 0; t < truth.size(); ++t) {
      out << fmt::format("{},{},{}\n", id, truth.grid()[t], truth[t]);
    }
  }
  finish(out, path);
}

void write_labels_csv(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& labels) {
  auto out = open_output(path);
  out << "series_id,label\n";
  for (const auto& [id, label] : labels) out << id << ',' << label << '\n';
  finish(out, path);
}

std::vector<std::pair<std::string, std::string>> read_labels_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::pair<std::string, std::string>> out;
  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    if (!header_seen) {
      if (text != "series_id,label") throw ParseError(line, "expected header 'series_id,label'");
      header_seen = true;
      continue;
    }
    const auto fields = split(text, ',');
    if (fields.size() != 2 || fields[0].empty()) throw ParseError(line, "expected series_id,label");
    out.emplace_back(std::string(fields[0]), std::string(fields[1]));
  }
  return out;
}

nlohmann::ordered_json to_json(const Trajectory& trajectory) {
  const std::size_t n = trajectory.size();
  nlohmann::ordered_json j;
  j["time"] = array_of(n, [&](std::size_t t) { return trajectory.grid()[t]; });
  j["mean"] = array_of(n, [&](std::size_t t) { return trajectory[t].mean; });
  j["variance"] = array_of(n, [&](std::size_t t) { return trajectory[t].variance; });
  return j;
}

nlohmann::ordered_json to_json(const pkf::PkfState& state) {
  nlohmann::ordered_json j;
  add_state_fields(j, state);
  return j;
}

nlohmann::ordered_json to_json(const pkf::PkfResult& result) {
  nlohmann::ordered_json j;
  add_state_fields(j, result.final);
  j["convergence"] = {{"max_abs_dq", result.convergence.max_abs_dq},
                      {"max_filter_variance", result.convergence.max_filter_variance}};
  auto history = nlohmann::ordered_json::array();
  for (const auto& state : result.history) history.push_back(to_json(state));
  j["history"] = std::move(history);
  return j;
}

nlohmann::ordered_json to_json(const bench::QRatioSummary& summary) {
  nlohmann::ordered_json j;
  auto series = nlohmann::ordered_json::array();
  for (const auto& s : summary.series) {
    series.push_back({{"series_id", s.series_id},
                      {"label", s.label},
                      {"mean_log_ratio", s.mean_log_ratio},
                      {"mean_data_variance", s.mean_data_variance},
                      {"variance_decile", s.variance_decile + 1}});
  }
  auto groups = [](const std::vector<bench::GroupRatio>& gs) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& g : gs) {
      arr.push_back({{"key", g.key}, {"count", g.count}, {"mean_log_ratio", g.mean_log_ratio}});
    }
    return arr;
  };
  j["by_label"] = groups(summary.by_label);
  j["by_variance_decile"] = groups(summary.by_variance_decile);
  j["series"] = std::move(series);
  return j;
}

Trajectory trajectory_from_json(const nlohmann::ordered_json& j) {
  try {
    const auto times = j.at("time").get<std::vector<double>>();
    const auto means = j.at("mean").get<std::vector<double>>();
    const auto vars = j.at("variance").get<std::vector<double>>();
    if (means.size() != times.size() || vars.size() != times.size()) {
      throw InvalidData("trajectory arrays differ in length");
    }
    std::vector<GaussianEstimate> est(times.size());
    for (std::size_t t = 0; t < times.size(); ++t) est[t] = {means[t], vars[t]};
    return Trajectory(TimeGrid(times), std::move(est));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidData(std::string("malformed trajectory JSON: ") + e.what());
  }
}

Trajectory read_trajectory_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, e.what());
  }
  return trajectory_from_json(j);
}

void write_benchmark_csv(std::ostream& out, const bench::BenchmarkReport& report) {
  out << "algorithm,parameters,mse,error\n";
  for (const auto& row : report.rows) {
    const std::string label = row.spec.label();
    const auto space = label.find(' ');
    const std::string params = space == std::string::npos ? "" : label.substr(space + 1);
    out << fmt::format("{},{},{},{}\n", bench::to_string(row.spec.method), params,
                       row.ok() ? fmt::format("{}", row.mse) : std::string("nan"),
                       csv_field(row.error));
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  auto out = open_output(path);
  out << text;
  finish(out, path);
}

void write_result(const pkf::PkfResult& result, const std::filesystem::path& path) {
  write_text(path, to_json(result).dump(2) + "\n");
}

void write_result(const Trajectory& trajectory, const std::filesystem::path& path) {
  write_text(path, to_json(trajectory).dump(2) + "\n");
}

void write_result(const bench::BenchmarkReport& report, const std::filesystem::path& path) {
  std::ostringstream out;
  write_benchmark_csv(out, report);
  write_text(path, out.str());
}

void write_result(const bench::QRatioSummary& summary, const std::filesystem::path& path) {
  write_text(path, to_json(summary).dump(2) + "\n");
}

}  // namespace pathkf::cli
