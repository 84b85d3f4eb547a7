#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "pathkf/baselines.hpp"
#include "pathkf/bench.hpp"
#include "pathkf/models.hpp"
#include "pathkf/synth.hpp"

namespace pathkf::cli {

struct RunConfig {
  bench::Method algorithm = bench::Method::PKF;
  std::optional<models::ModelKind> model;  // unset: the subcommand's default
  std::size_t iterations = 10;
  double q = 1.0;
  baselines::UtParams ut;
  std::string input;
  std::string output = "-";
  std::size_t jobs = 1;
  std::uint64_t seed = 42;
  bool retain_history = false;

  synth::BirthDeathScenario scenario;
  synth::GenePanelScenario panel;

  /// Throws InvalidConfig on out-of-range values.
  void validate() const;
  bench::AlgorithmSpec spec() const;
};

/// Accepts pkf, kf, ukf, urts, ipls.
bench::Method parse_method(std::string_view text);

/// Overlays the keys present in `j` onto `config`. Unknown keys are errors.
void apply_json(RunConfig& config, const nlohmann::json& j);

RunConfig load_config(const std::filesystem::path& path);

}  // namespace pathkf::cli
