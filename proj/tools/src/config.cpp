#include "pathkf_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <string>

namespace pathkf::cli {

namespace {

using Json = nlohmann::json;

template <typename T>
T get(const Json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw InvalidConfig("config key '" + key + "' has the wrong type");
  }
}

std::size_t get_count(const Json& j, const std::string& key) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw InvalidConfig("config key '" + key + "' must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

void reject_unknown(const Json& j, std::initializer_list<std::string_view> known,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw InvalidConfig("unknown config key '" + where + key + "'");
  }
}

}  // namespace

bench::Method parse_method(std::string_view text) {
  if (text == "pkf") return bench::Method::PKF;
  if (text == "kf") return bench::Method::AdaptiveKF;
  if (text == "ukf") return bench::Method::UnscentedKF;
  if (text == "urts") return bench::Method::UnscentedRTS;
  if (text == "ipls") return bench::Method::IPLS;
  throw InvalidConfig("unknown algorithm '" + std::string(text) + "'");
}

void RunConfig::validate() const {
  if (iterations < 1) throw InvalidConfig("iterations must be >= 1");
  if (!(q >= 0.0) || !std::isfinite(q)) throw InvalidConfig("q must be finite and >= 0");
  if (jobs < 1) throw InvalidConfig("jobs must be >= 1");
  if (output.empty()) throw InvalidConfig("output path must not be empty");
  if (!std::isfinite(ut.alpha) || !std::isfinite(ut.beta) || !std::isfinite(ut.kappa) ||
      !(ut.alpha * ut.alpha * (1.0 + ut.kappa) > 0.0)) {
    throw InvalidConfig("unscented parameters must be finite with alpha^2 (1 + kappa) > 0");
  }
  scenario.validate();
  panel.validate();
}

bench::AlgorithmSpec RunConfig::spec() const {
  return bench::AlgorithmSpec{algorithm, q, iterations, ut};
}

void apply_json(RunConfig& c, const Json& j) {
  if (!j.is_object()) throw InvalidConfig("config must be a JSON object");
  reject_unknown(j,
                 {"algorithm", "model", "iterations", "q", "ut", "input", "output", "jobs", "seed",
                  "retain_history", "scenario", "panel"},
                 "");
  if (j.contains("algorithm")) c.algorithm = parse_method(get<std::string>(j["algorithm"], "algorithm"));
  if (j.contains("model")) c.model = models::parse_model_kind(get<std::string>(j["model"], "model"));
  if (j.contains("iterations")) c.iterations = get_count(j["iterations"], "iterations");
  if (j.contains("q")) c.q = get<double>(j["q"], "q");
  if (j.contains("input")) c.input = get<std::string>(j["input"], "input");
  if (j.contains("output")) c.output = get<std::string>(j["output"], "output");
  if (j.contains("jobs")) c.jobs = get_count(j["jobs"], "jobs");
  if (j.contains("seed")) c.seed = get_count(j["seed"], "seed");
  if (j.contains("retain_history")) c.retain_history = get<bool>(j["retain_history"], "retain_history");

  if (j.contains("ut")) {
    const Json& u = j["ut"];
    reject_unknown(u, {"alpha", "beta", "kappa"}, "ut.");
    if (u.contains("alpha")) c.ut.alpha = get<double>(u["alpha"], "ut.alpha");
    if (u.contains("beta")) c.ut.beta = get<double>(u["beta"], "ut.beta");
    if (u.contains("kappa")) c.ut.kappa = get<double>(u["kappa"], "ut.kappa");
  }
  if (j.contains("scenario")) {
    const Json& s = j["scenario"];
    reject_unknown(s, {"n0", "t_end", "dt", "replicates"}, "scenario.");
    if (s.contains("n0")) c.scenario.n0 = get<double>(s["n0"], "scenario.n0");
    if (s.contains("t_end")) c.scenario.t_end = get<double>(s["t_end"], "scenario.t_end");
    if (s.contains("dt")) c.scenario.dt = get<double>(s["dt"], "scenario.dt");
    if (s.contains("replicates")) c.scenario.replicates = get_count(s["replicates"], "scenario.replicates");
  }
  if (j.contains("panel")) {
    const Json& p = j["panel"];
    reject_unknown(p, {"n_genes", "replicates", "dynamic_fraction", "noise_fraction", "times"},
                   "panel.");
    if (p.contains("n_genes")) c.panel.n_genes = get_count(p["n_genes"], "panel.n_genes");
    if (p.contains("replicates")) c.panel.replicates = get_count(p["replicates"], "panel.replicates");
    if (p.contains("dynamic_fraction")) {
      c.panel.dynamic_fraction = get<double>(p["dynamic_fraction"], "panel.dynamic_fraction");
    }
    if (p.contains("noise_fraction")) {
      c.panel.noise_fraction = get<double>(p["noise_fraction"], "panel.noise_fraction");
    }
    if (p.contains("times")) c.panel.times = get<std::vector<double>>(p["times"], "panel.times");
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidConfig("cannot open config '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidConfig("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  RunConfig config;
  apply_json(config, j);
  return config;
}

}  // namespace pathkf::cli
