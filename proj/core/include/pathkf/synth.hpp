#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pathkf/core.hpp"

namespace pathkf::synth {

/// Constant birth and death rates on [start, end).
struct RateSegment {
  double start = 0.0;
  double end = std::numeric_limits<double>::infinity();
  double k_birth = 0.0;
  double k_death = 0.0;
};

/// Constant noise standard deviation on [start, end).
struct NoiseSegment {
  double start = 0.0;
  double end = std::numeric_limits<double>::infinity();
  double sd = 0.0;
};

struct BirthDeathScenario {
  double n0 = 100.0;
  double t_end = 20.0;
  double dt = 0.25;
  std::size_t replicates = 100;
  std::vector<RateSegment> rates = {{0.0, 5.0, 0.05, 0.05},
                                    {5.0, 15.0, 0.15, 0.05},
                                    {15.0, std::numeric_limits<double>::infinity(), 0.15, 0.5}};
  std::vector<NoiseSegment> noise = {{0.0, 10.0, 1.0},
                                     {10.0, std::numeric_limits<double>::infinity(), 5.0}};
  std::uint64_t seed = 42;

  void validate() const;
  TimeGrid grid() const;
};

struct SimulatedSeries {
  GroundTruth truth;
  TimeSeriesData data;
  std::string label;
};

/// Piecewise-exact population at time t.
double birth_death_truth(const BirthDeathScenario& scenario, double t);

SimulatedSeries simulate_birth_death(const BirthDeathScenario& scenario);

/// Expression and degradation rates on [start, end) for one gene.
struct RegulationSegment {
  double start = 0.0;
  double end = std::numeric_limits<double>::infinity();
  double k_exp = 0.0;
  double k_deg = 0.0;
};

struct GeneSpec {
  std::string id;
  double x0 = 0.0;
  std::vector<RegulationSegment> schedule;
  double noise_sd = 0.0;
};

/// Constant-regulation truth of one gene at time t.
double gene_truth(const GeneSpec& gene, double t);

struct GenePanelScenario {
  std::size_t n_genes = 200;
  std::vector<double> times = default_times();
  std::size_t replicates = 2;
  double dynamic_fraction = 0.5;
  double noise_fraction = 0.05;  // noise sd as a fraction of the baseline level
  std::uint64_t seed = 42;

  static std::vector<double> default_times();
  void validate() const;
};

/// Random per-gene schedules. Dynamic genes switch k_exp as a square wave
/// with a roughly daily period; static genes sit at their steady state.
std::vector<GeneSpec> make_gene_specs(const GenePanelScenario& scenario);

SimulatedSeries simulate_gene(const GeneSpec& gene, const TimeGrid& grid, std::size_t replicates,
                              std::uint64_t seed, std::uint64_t index);

std::vector<SimulatedSeries> simulate_gene_panel(const GenePanelScenario& scenario);

}  // namespace pathkf::synth
